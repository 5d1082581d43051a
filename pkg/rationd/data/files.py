"""Schema-versioned JSON documents for instances, allocations and generator configs."""
import os
import logging
from typing import Literal, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from rationd import config
from rationd.exceptions import DocumentError, SchemaVersionError
from rationd.schemas import Allocation, Instance
from rationd.utils import FileHandlerMixin

from .generator import GeneratorConfig

logger = logging.getLogger(__name__)

DocumentType = TypeVar("DocumentType", bound=BaseModel)


class DocumentHeader(BaseModel):
    """Fields every document carries"""
    schema_version: int
    kind: str


class InstanceDocument(BaseModel):
    """Instance with optional generator provenance"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    schema_version: int = config.SCHEMA_VERSION
    kind: Literal["instance"] = "instance"
    instance: Instance
    provenance: Optional[GeneratorConfig] = None


class AllocationDocument(BaseModel):
    """Allocation with the solver that produced it and the instance it belongs to"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    schema_version: int = config.SCHEMA_VERSION
    kind: Literal["allocation"] = "allocation"
    solver: str = Field(title="Algorithm name")
    instance_digest: str = Field(title="SHA-256 of the instance JSON")
    allocation: Allocation


class GeneratorConfigDocument(BaseModel):
    """Generator parameters"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    schema_version: int = config.SCHEMA_VERSION
    kind: Literal["generator_config"] = "generator_config"
    generator: GeneratorConfig


def describe_validation_error(error: ValidationError) -> str:
    """One 'location: message' entry per error"""
    return "; ".join(
        f"{'.'.join(str(part) for part in item['loc']) or '<document>'}: {item['msg']}"
        for item in error.errors()
    )


class JsonDocumentFile(FileHandlerMixin):
    """Reads and writes one JSON document"""

    VALID_EXTENSIONS = [".json"]

    def __init__(self, file_path: os.PathLike | str) -> None:
        self.file_path = file_path

    def read(self, document_type: Type[DocumentType]) -> DocumentType:
        """Parse and validate; errors name the file and the offending field"""
        self.ensure_exists()
        text = self.file_path.read_text(encoding="utf-8")
        try:
            header = DocumentHeader.model_validate_json(text)
        except ValidationError as error:
            raise DocumentError(f"{self.file_path}: {describe_validation_error(error)}") from error

        if header.schema_version != config.SCHEMA_VERSION:
            raise SchemaVersionError(
                f"{self.file_path}: schema version {header.schema_version}, expected {config.SCHEMA_VERSION}")

        try:
            document = document_type.model_validate_json(text)
        except ValidationError as error:
            raise DocumentError(f"{self.file_path}: {describe_validation_error(error)}") from error
        logger.debug(f"read {header.kind} document {self.file_path}")
        return document

    def write(self, document: BaseModel) -> None:
        """Write the document as indented JSON"""
        self.file_path.parent.mkdir(parents=True, exist_ok=True)
        self.file_path.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.debug(f"wrote {self.file_path}")


def read_instance(path: os.PathLike | str) -> Instance:
    """Instance from an instance document"""
    return JsonDocumentFile(path).read(InstanceDocument).instance


def read_instance_document(path: os.PathLike | str) -> InstanceDocument:
    """Instance document including provenance"""
    return JsonDocumentFile(path).read(InstanceDocument)


def write_instance(instance: Instance, path: os.PathLike | str,
                   provenance: Optional[GeneratorConfig] = None) -> None:
    """Write an instance document"""
    JsonDocumentFile(path).write(InstanceDocument(instance=instance, provenance=provenance))


def read_allocation(path: os.PathLike | str) -> AllocationDocument:
    """Allocation document"""
    return JsonDocumentFile(path).read(AllocationDocument)


def write_allocation(alloc: Allocation, path: os.PathLike | str, solver: str, instance: Instance) -> None:
    """Write an allocation document tied to its instance digest"""
    JsonDocumentFile(path).write(AllocationDocument(solver=solver, instance_digest=instance.digest(),
                                                    allocation=alloc))


def read_generator_config(path: os.PathLike | str) -> GeneratorConfig:
    """Generator config from its document"""
    return JsonDocumentFile(path).read(GeneratorConfigDocument).generator


def write_generator_config(generator_config: GeneratorConfig, path: os.PathLike | str) -> None:
    """Write a generator config document"""
    JsonDocumentFile(path).write(GeneratorConfigDocument(generator=generator_config))
