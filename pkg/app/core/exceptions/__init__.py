from .domain_exceptions import *  # noqa: F401,F403
from .solver_exceptions import *  # noqa: F401,F403
from .base_exceptions import BaseSolverException  # noqa: F401
from .error_response import ErrorResponse  # noqa: F401
