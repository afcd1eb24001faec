"""
Training objective: squared error of the initial and the refined map.

Both the map the feature column predicts directly and the map left after
the last refinement step are compared with the ground-truth density, and
the two summed squared errors are added. Maps of intermediate steps are not
supervised on their own.

Example:
    >>> target = Tensor(np.ones((1, 1, 2, 2)))
    >>> float(loss(Tensor(np.zeros((1, 1, 2, 2))), target, target).data)
    4.0
"""

from ..tensor_core import Tensor, as_tensor, square_error
from ..validators.base.error_handler import DimensionError, ErrorFormatter

_formatter = ErrorFormatter()


def loss(m0: Tensor, mn: Tensor, target: Tensor) -> Tensor:
    """``||M0 - D||^2 + ||Mn - D||^2`` summed over every cell.

    Only the initial and the final map are supervised; intermediate maps of
    the refinement loop receive gradient solely through Mn.

    Raises:
        DimensionError: If the three maps do not share one shape.
    """
    target = as_tensor(target)
    for name, value in (("initial map", m0), ("refined map", mn)):
        if value.shape != target.shape:
            raise DimensionError(_formatter.format_dimension_error("loss", name, value.shape, target.shape))
    return square_error(m0, target) + square_error(mn, target)
