"""Instance generation and document files."""
from .generator import GeneratorConfig, GroupSpec, InstanceBounds, SupplyModel, generate, sample_instance
from .files import (AllocationDocument, read_allocation, read_generator_config, read_instance,
                    read_instance_document, write_allocation, write_generator_config, write_instance)
