from typing import Callable, Optional

import numpy as np

# classical Runge-Kutta tableau
RK4_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.5, 0.0, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)
RK4_B = np.array([1.0, 2.0, 2.0, 1.0]) / 6.0

RightHandSide = Callable[[np.ndarray], Optional[np.ndarray]]


def rk4_step(
    fun: RightHandSide, y: np.ndarray, h: float, f0: Optional[np.ndarray] = None
) -> Optional[np.ndarray]:
    """One explicit RK4 step of the autonomous system dy/dt = fun(y).

    ``fun`` returns None when it cannot be evaluated at a stage (e.g. a weight
    left the positive orthant); the step then fails and None is returned.
    ``f0`` may carry the already known derivative at ``y``.
    """
    stages = np.empty((RK4_B.size, y.size))
    for k in range(RK4_B.size):
        if k == 0 and f0 is not None:
            stages[0] = f0
            continue
        state = y + h * (RK4_A[k, :k] @ stages[:k])
        derivative = fun(state)
        if derivative is None:
            return None
        stages[k] = derivative
    return y + h * (RK4_B @ stages)
