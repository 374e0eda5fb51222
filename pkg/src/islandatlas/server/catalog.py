"""Runtime atlas catalog: country facts joined to operator-supplied data.

The country table (names, capitals, populations, base scales, site
lists) ships with the package.  A catalog file adds what only an
operator knows: where each warehouse and cache file lives, the landing
view of each country, and the zoom extent of every named site::

    {
      "entries": {
        "FJ": {
          "warehouse": "warehouses/FJ.piwa",
          "cache": "caches/FJ.pisc",
          "view": [176.5, -20.4, 182.8, -12.2],
          "sites": {"Viti Levu": [176.8, -18.4, 178.8, -17.2], "...": []}
        }
      }
    }

Every catalog entry must appear, and site names must match the country
table exactly.  Relative paths resolve against the catalog file's
directory, so a bundle directory stays relocatable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Any

from .. import catalog as table
from ..errors import ConfigError, UnknownCountryError
from ..warehouse.model import THEME_GROUPS

Bbox = tuple[float, float, float, float]


@dataclass(frozen=True)
class SiteView:
    name: str
    bbox: Bbox


@dataclass(frozen=True)
class AtlasEntry:
    info: table.CountryInfo
    warehouse_path: str
    cache_path: str
    view: Bbox
    sites: tuple[SiteView, ...]

    @property
    def code(self) -> str:
        return self.info.code

    def site(self, name: str) -> SiteView:
        for site in self.sites:
            if site.name == name:
                return site
        raise ConfigError(f"no site {name!r} in {self.info.code}")

    def to_payload(self) -> dict[str, Any]:
        return {
            "code": self.info.code,
            "name": self.info.name,
            "capital": self.info.capital,
            "population": self.info.population,
            "area_km2": self.info.area_km2,
            "coastline_km": self.info.coastline_km,
            "base_scale_denom": self.info.base_scale_denom,
            "view": list(self.view),
            "sites": [{"name": s.name, "bbox": list(s.bbox)} for s in self.sites],
        }


def _parse_bbox(raw: Any, context: str) -> Bbox:
    if (
        not isinstance(raw, list)
        or len(raw) != 4
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
    ):
        raise ConfigError(f"{context}: bbox must be [minlon, minlat, maxlon, maxlat]")
    minx, miny, maxx, maxy = (float(v) for v in raw)
    if not (minx < maxx and miny < maxy):
        raise ConfigError(f"{context}: bbox is empty or inverted")
    return (minx, miny, maxx, maxy)


class AtlasCatalog:
    """All thirteen entries, countries in table order, the region last."""

    def __init__(self, entries: list[AtlasEntry]) -> None:
        self.entries = tuple(entries)
        self._by_code = {entry.code: entry for entry in entries}

    def entry(self, code: str) -> AtlasEntry:
        try:
            return self._by_code[code]
        except KeyError:
            raise UnknownCountryError(f"no catalog entry {code!r}") from None

    def countries_payload(self) -> dict[str, Any]:
        return {
            "countries": [
                e.to_payload() for e in self.entries if e.code != table.REGION_CODE
            ],
            "region": self.entry(table.REGION_CODE).to_payload(),
        }

    def search(self, q: str) -> list[dict[str, Any]]:
        """Case-insensitive substring hits over countries, sites, themes."""
        needle = q.lower()
        hits: list[dict[str, Any]] = []
        for entry in self.entries:
            if needle in entry.info.name.lower():
                hits.append(
                    {
                        "kind": "country",
                        "code": entry.code,
                        "name": entry.info.name,
                        "bbox": list(entry.view),
                        "scale_denom": entry.info.base_scale_denom,
                    }
                )
        for entry in self.entries:
            for site in entry.sites:
                if needle in site.name.lower():
                    hits.append(
                        {
                            "kind": "site",
                            "code": entry.code,
                            "country": entry.info.name,
                            "name": site.name,
                            "bbox": list(site.bbox),
                            "scale_denom": entry.info.base_scale_denom,
                        }
                    )
        for group in THEME_GROUPS:
            if needle in group:
                hits.append({"kind": "theme", "name": group})
        return hits


def load_catalog(path: str | os.PathLike) -> AtlasCatalog:
    path = os.path.abspath(os.fspath(path))
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read catalog {path}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"catalog {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), dict):
        raise ConfigError(f"catalog {path} must be an object with \"entries\"")
    raw_entries = doc["entries"]
    base = os.path.dirname(path)

    infos = list(table.COUNTRIES) + [table.REGION]
    known = {info.code for info in infos}
    extra = set(raw_entries) - known
    if extra:
        raise ConfigError(f"catalog {path} has unknown entries: {sorted(extra)}")

    entries: list[AtlasEntry] = []
    for info in infos:
        raw = raw_entries.get(info.code)
        if raw is None:
            raise ConfigError(f"catalog {path} is missing entry {info.code}")
        context = f"catalog entry {info.code}"
        if not isinstance(raw, dict):
            raise ConfigError(f"{context} must be an object")
        for key in ("warehouse", "cache", "view", "sites"):
            if key not in raw:
                raise ConfigError(f"{context} is missing {key!r}")
        sites_raw = raw["sites"]
        if not isinstance(sites_raw, dict):
            raise ConfigError(f"{context}: sites must be an object")
        if set(sites_raw) != set(info.sites):
            raise ConfigError(
                f"{context}: site names must match the country table exactly"
            )
        sites = tuple(
            SiteView(name, _parse_bbox(sites_raw[name], f"{context} site {name!r}"))
            for name in info.sites
        )
        entries.append(
            AtlasEntry(
                info=info,
                warehouse_path=os.path.normpath(os.path.join(base, raw["warehouse"])),
                cache_path=os.path.normpath(os.path.join(base, raw["cache"])),
                view=_parse_bbox(raw["view"], f"{context} view"),
                sites=sites,
            )
        )
    return AtlasCatalog(entries)
