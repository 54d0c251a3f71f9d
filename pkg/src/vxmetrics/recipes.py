"""Crafting dependency graph over block types."""

from __future__ import annotations

from graphlib import CycleError as _GraphCycle, TopologicalSorter
from typing import Iterable, Mapping, Sequence

from .errors import CycleError, UnknownBlockError


class RecipeGraph:
    """Block name -> ingredient block names. An empty list marks a raw block.

    Names that never appear as a key are raw as well.
    """

    def __init__(self, ingredients: Mapping[str, Sequence[str]], catalog=None):
        self.ingredients = {name: tuple(parts) for name, parts in ingredients.items()}
        if catalog is not None:
            for name, parts in self.ingredients.items():
                for n in (name, *parts):
                    if n not in catalog:
                        raise UnknownBlockError(f"recipe block {n!r} is not in the catalog")
        try:
            self.order = tuple(TopologicalSorter(self.ingredients).static_order())
        except _GraphCycle as exc:
            cycle = list(dict.fromkeys(exc.args[1]))
            raise CycleError(f"recipe cycle: {' -> '.join(exc.args[1])}", cycle) from None

    def __contains__(self, name):
        return name in self.ingredients

    def __eq__(self, other):
        return isinstance(other, RecipeGraph) and self.ingredients == other.ingredients

    def recipe(self, name: str) -> tuple[str, ...]:
        return self.ingredients.get(name, ())

    def is_raw(self, name: str) -> bool:
        return not self.ingredients.get(name)


class CraftingResolver:
    """Answers availability and crafting-depth questions for one level.

    ``present`` holds the block names found anywhere in the level; ``mined``
    names are available unconditionally and are never counted as crafted.
    """

    def __init__(self, recipes: RecipeGraph, present: Iterable[str], mined: Iterable[str]):
        self.recipes = recipes
        self.present = frozenset(present)
        self.mined = frozenset(mined)
        self._available: dict[str, bool] = {}
        self._closure: dict[str, frozenset] = {}

    def _crafted(self, name: str) -> bool:
        return name not in self.mined and not self.recipes.is_raw(name)

    def available(self, name: str) -> bool:
        hit = self._available.get(name)
        if hit is None:
            if name in self.present or name in self.mined:
                hit = True
            elif self.recipes.is_raw(name):
                hit = False
            else:
                hit = all(self.available(part) for part in self.recipes.recipe(name))
            self._available[name] = hit
        return hit

    def crafted_closure(self, name: str) -> frozenset:
        """Crafted blocks on the way from raw materials to ``name``, inclusive."""
        hit = self._closure.get(name)
        if hit is None:
            if not self._crafted(name):
                hit = frozenset()
            else:
                hit = frozenset({name}).union(*(self.crafted_closure(p) for p in self.recipes.recipe(name)))
            self._closure[name] = hit
        return hit

    def depth(self, name: str) -> int:
        if not self._crafted(name):
            return 0
        if not all(self.available(part) for part in self.recipes.recipe(name)):
            return 0
        return len(self.crafted_closure(name))
