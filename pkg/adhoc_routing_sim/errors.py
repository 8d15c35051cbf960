# errors.py - Exception hierarchy
"""
Exceptions raised by the simulator.
Every error derives from SimulationError so the CLI can report them uniformly.
"""

from typing import Optional


class SimulationError(Exception):
    """Base class for all simulator errors"""

    def __init__(
        self,
        message: str,
        topology_id: Optional[int] = None,
        service_id: Optional[int] = None,
    ):
        self.message = message
        self.topology_id = topology_id
        self.service_id = service_id
        super().__init__(self.location_prefix + message)

    @property
    def location_prefix(self) -> str:
        if self.topology_id is None:
            return ""
        if self.service_id is None:
            return f"[topology {self.topology_id}] "
        return f"[topology {self.topology_id}, service {self.service_id}] "

    def with_context(
        self, topology_id: int, service_id: Optional[int] = None
    ) -> "SimulationError":
        """Return a copy of this error tagged with where it happened."""
        return type(self)(self.message, topology_id=topology_id, service_id=service_id)

    def __reduce__(self):
        # Errors cross process boundaries when topologies run in a pool.
        return type(self), (self.message, self.topology_id, self.service_id)


class ConfigError(SimulationError, ValueError):
    """Invalid or unparsable experiment configuration"""


class InvalidInputError(SimulationError, ValueError):
    """A precondition of an operation was violated"""


class PlacementInfeasibleError(SimulationError):
    """Mobiles cannot be packed into the network disc"""


class NumericalInstabilityError(SimulationError, ArithmeticError):
    """An outage probability left the guard band around [0, 1]"""
