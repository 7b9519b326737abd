"""Numerical tolerances, overridable per run.

The defaults are the contract values. ``use_tolerances`` swaps them for a
block of code (the CLI uses it for ``--quad-tol`` and friends); results cached
under one set of tolerances are never reused under another because the active
``Tolerances`` instance is part of every cache key.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    quad_abs: float = 1e-13
    quad_rel: float = 1e-11
    ode_rel: float = 1e-11
    ode_abs: float = 1e-13
    root: float = 1e-15
    eig_rel: float = 1e-9
    fd_step_scale: float = 1e-5
    kernel_rel: float = 1e-6

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value!r}")


DEFAULT = Tolerances()
_active: contextvars.ContextVar[Tolerances] = contextvars.ContextVar("tolerances", default=DEFAULT)


def current() -> Tolerances:
    return _active.get()


@contextlib.contextmanager
def use_tolerances(tol: Tolerances | None = None, **overrides):
    base = tol if tol is not None else current()
    token = _active.set(replace(base, **overrides) if overrides else base)
    try:
        yield _active.get()
    finally:
        _active.reset(token)
