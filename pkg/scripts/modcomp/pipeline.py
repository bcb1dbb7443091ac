"""Lazy (group, signature) pipeline shared by the CLI commands and the census."""

from __future__ import annotations

import functools
import logging

from .braid import StratumPartition, strata
from .errors import GroupOrderCapError, SignatureError
from .genvec import (
    DEFAULT_MAX_VECTORS,
    GeneratingVector,
    Signature,
    VectorClass,
    aut_classes,
    class_lookup,
    enumerate_vectors,
    genus,
)
from .groups import DEFAULT_MAX_ORDER, Automorphism, GroupSpec, GroupTable, automorphisms, build_group

logger = logging.getLogger(__name__)


class Pipeline:
    """Each stage is computed on first use and kept."""

    def __init__(
        self,
        group: GroupSpec | GroupTable,
        signature: Signature,
        max_group_order: int = DEFAULT_MAX_ORDER,
        max_vectors: int = DEFAULT_MAX_VECTORS,
        threads: int = 1,
    ):
        self._spec = group
        self.signature = signature
        self.max_group_order = max_group_order
        self.max_vectors = max_vectors
        self.threads = threads

    def __repr__(self):
        name = self.group.name if "group" in self.__dict__ else self._spec
        return f"Pipeline({name!r}, {self.signature})"

    @functools.cached_property
    def group(self) -> GroupTable:
        if isinstance(self._spec, GroupTable):
            if self._spec.order > self.max_group_order:
                raise GroupOrderCapError(
                    f"{self._spec.name} has order {self._spec.order}, above the cap {self.max_group_order}"
                )
            return self._spec
        return build_group(self._spec, self.max_group_order)

    @functools.cached_property
    def genus(self) -> int | None:
        """None when Riemann-Hurwitz gives no admissible genus; such a pair has no vectors."""
        try:
            return genus(self.group, self.signature)
        except SignatureError as exc:
            logger.info("%s", exc)
            return None

    @functools.cached_property
    def vectors(self) -> list[GeneratingVector]:
        if self.genus is None:
            return []
        return enumerate_vectors(self.group, self.signature, self.max_vectors, self.threads)

    @functools.cached_property
    def automorphisms(self) -> list[Automorphism]:
        return automorphisms(self.group, self.max_group_order)

    @functools.cached_property
    def classes(self) -> list[VectorClass]:
        if not self.vectors:
            return []
        return aut_classes(self.group, self.vectors, self.automorphisms)

    @functools.cached_property
    def lookup(self) -> dict[GeneratingVector, int]:
        return class_lookup(self.classes, self.automorphisms)

    @functools.cached_property
    def strata(self) -> StratumPartition:
        return strata(self.group, self.signature, self.classes, self.lookup, self.threads)
