"""Allocator module. It contains the Allocator class and the AllocationStrategy interface."""
import abc
import logging

from rationd.exceptions import ConfigurationError
from rationd.schemas import Allocation, Instance

logger = logging.getLogger(__name__)


class AllocationStrategy(abc.ABC):
    """Allocation strategy interface"""

    #: Solver name written into allocation documents and run summaries
    name: str = "abstract"

    #: Whether the strategy honors overall quotas
    model2: bool = False

    @abc.abstractmethod
    def allocate(self, instance: Instance) -> Allocation:
        """Allocate the resource over the whole horizon"""
        raise NotImplementedError("Method not implemented")

    def check_compatible(self, instance: Instance) -> None:
        """Raise when the instance lacks what the strategy needs"""
        if self.model2 and not instance.has_overall_quotas:
            missing = [category.id for category in instance.categories if category.overall_quota is None]
            raise ConfigurationError(f"{self.name} needs overall quotas; missing on {missing}")


class Allocator:
    """Main allocation class. It uses an allocation strategy to solve an instance."""

    def __init__(self, strategy: AllocationStrategy) -> None:
        self._strategy = strategy

    @property
    def strategy(self) -> AllocationStrategy:
        """Allocation strategy"""
        return self._strategy

    def allocate(self, instance: Instance) -> Allocation:
        """Allocate with the current strategy"""
        self.strategy.check_compatible(instance)
        logger.debug(f"allocating {len(instance.agents)} agents over {instance.num_days} days "
                     f"with {self.strategy.name}")
        return self.strategy.allocate(instance)
