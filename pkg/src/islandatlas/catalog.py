"""The atlas catalog: member countries, base scales, and site entries.

Twelve countries plus one regional overview.  Population, land area and
coastline figures are the 2003 estimates the atlas was compiled from;
base scales follow terrestrial size, and sites are the named map extents
users can jump to.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownCountryError

REGION_CODE = "REGION"

SCALE_REGION = 1_000_000
SCALE_LARGE = 250_000
SCALE_MEDIUM = 100_000
SCALE_SMALL = 50_000


@dataclass(frozen=True)
class CountryInfo:
    code: str
    name: str
    capital: str | None
    population: int
    area_km2: int
    coastline_km: int
    base_scale_denom: int
    sites: tuple[str, ...]


COUNTRIES: tuple[CountryInfo, ...] = (
    CountryInfo(
        "CK", "Cook Islands", "Rarotonga", 21008, 240, 120, SCALE_MEDIUM,
        ("Northern Group", "Southern Group", "Rarotonga"),
    ),
    CountryInfo(
        "FJ", "Fiji Islands", "Suva", 868531, 18270, 1129, SCALE_LARGE,
        (
            "Viti Levu",
            "Vanua Levu / Taveuni",
            "Yassawa / Mamanucas",
            "Lomaiviti Group",
            "Lau group",
            "Kadavu group",
            "Rotuma",
        ),
    ),
    CountryInfo(
        "KI", "Kiribati", "Bairiki", 98549, 811, 1143, SCALE_SMALL,
        ("Gilbert Islands", "Line Islands", "Phoenix Islands"),
    ),
    CountryInfo(
        "MH", "Marshall Islands", "Majuro", 56429, 182, 370, SCALE_SMALL,
        ("Marshall Islands",),
    ),
    CountryInfo("NR", "Nauru", "Yaren", 12570, 21, 30, SCALE_SMALL, ("Nauru",)),
    CountryInfo("NU", "Niue", "Alofi", 2145, 260, 64, SCALE_SMALL, ("Niue",)),
    CountryInfo("TK", "Tokelau", None, 1418, 10, 101, SCALE_SMALL, ("Tokelau",)),
    CountryInfo(
        "TO", "Tonga", "Nuku'alofa", 108141, 748, 419, SCALE_MEDIUM,
        ("Vavau group", "Haapai group", "Tongatapu / Ata"),
    ),
    CountryInfo("TV", "Tuvalu", "Funafuti", 11305, 26, 24, SCALE_MEDIUM, ("Tuvalu",)),
    CountryInfo(
        "SB", "Solomon Islands", "Honiara", 509190, 28450, 5313, SCALE_LARGE,
        (
            "Temotu",
            "Makira-Ulawa",
            "Malaita",
            "Guadalcanal / Central",
            "Isabel",
            "Western / Choiseul",
        ),
    ),
    CountryInfo(
        "VU", "Vanuatu", "Port Vila", 199414, 12200, 2528, SCALE_LARGE,
        (
            "Efate",
            "Tafea",
            "Shepherds",
            "Epi",
            "Paama",
            "Ambrym",
            "Pentecost",
            "Malakula",
            "Ambae-Maewo",
            "Santo-Malo",
            "Banks-Torres",
        ),
    ),
    CountryInfo(
        "WS", "Western Samoa", "Apia", 178173, 2944, 403, SCALE_LARGE,
        ("Upolu", "Savaii"),
    ),
)

REGION = CountryInfo(
    REGION_CODE, "Pacific Region", None, 0, 0, 0, SCALE_REGION, (),
)

_BY_CODE: dict[str, CountryInfo] = {c.code: c for c in COUNTRIES}
_BY_CODE[REGION_CODE] = REGION

ALL_CODES: tuple[str, ...] = tuple(c.code for c in COUNTRIES) + (REGION_CODE,)


def get_entry(code: str) -> CountryInfo:
    """Catalog entry for a country code or the REGION pseudo-code."""
    try:
        return _BY_CODE[code]
    except KeyError:
        raise UnknownCountryError(
            f"unknown country code {code!r}; expected one of {', '.join(ALL_CODES)}"
        ) from None


def is_known_code(code: str) -> bool:
    return code in _BY_CODE
