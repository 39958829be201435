"""Structure-preserving discrete-gradient integrators with Runge-Kutta baselines."""

from ._lyapstep import (
    __version__,
    check_definiteness,
    default_y0,
    dg_step,
    discrete_gradient,
    eval_vector_field,
    exact_solution,
    fit_order,
    integrate,
    lyapunov,
)

__all__ = [
    "__version__",
    "check_definiteness",
    "default_y0",
    "dg_step",
    "discrete_gradient",
    "eval_vector_field",
    "exact_solution",
    "fit_order",
    "integrate",
    "lyapunov",
]
