"""Estimator plumbing: parameter introspection and fitted-state checks.

Implements the get_params/set_params protocol that scikit-learn tooling
expects, without taking a dependency on it, so the reconstructors can be
cloned, configured, and composed by anything that speaks that convention.
"""

from __future__ import annotations

import inspect


class NotFittedError(RuntimeError):
    """Estimator attribute accessed before fit()."""


class ParamsMixin:
    """get_params/set_params/__repr__ derived from the __init__ signature.

    Subclasses must store every constructor argument under its own name and
    keep __init__ free of logic, so a clone via type(est)(**est.get_params())
    is exact.
    """

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return sorted(
            name
            for name, p in sig.parameters.items()
            if name != "self"
            and p.kind in (p.POSITIONAL_OR_KEYWORD, p.KEYWORD_ONLY)
        )

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "ParamsMixin":
        valid = self._param_names()
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters are {valid}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def check_is_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
