"""
Compiled complex permittivities of typical body-worn materials at 30 GHz.

Values and bracketed source tags are kept exactly as published, in the
published reading order. Two entries are stored as printed even though they
look odd:
  - "Sand 1.9 gr/cm³" has a lower eps' than "Sand 1.8 gr/cm³" (likely a typo
    upstream, denser sand normally has the higher eps').
  - "Methanol 0.6 Mol Solution" has no stated concentration convention.
"""
from functools import lru_cache

from src.materials.records import ComplexPermittivity, MaterialDatabase, MaterialRecord

# name, eps', eps'', source, category
BUILTIN_MATERIALS = (
    ("Silicone rubber", 3.0, 0.001, "[5]", "benign"),
    ("Flour", 1.9, 0.075, "[9]", "benign"),
    ("Petroleum Jelly", 2.15, 0.0007, "[6]", "benign"),
    ("Soap", 2.75, 0.225, "[9]", "benign"),
    ("Jujube Honey", 8.7, 4.8, "[7]", "water-based"),
    ("Wood", 2.55, 0.14, "[9]", "benign"),
    ("Baking Soda", 2.5, 0.025, "[8]", "surrogate"),
    ("Salt", 3.05, 0.015, "[9]", "surrogate"),
    ("Sugar", 3.5, 0.0025, "[9]", "surrogate"),
    ("Sand 1.9 gr/cm³", 4.5, 0.04, "[10]", "benign"),
    ("Powdered Sugar", 2.05, 0.004, "[10]", "benign"),
    ("Sand 1.8 gr/cm³", 5.9, 0.01, "[10]", "benign"),
    ("Talc", 1.75, 0.01, "[8]", "benign"),
    ("Plexiglass", 2.51, 0.01, "[15]", "benign"),
    ("Sheet glass (heated to 1737 F)", 5.29, 0.125, "[11]", "benign"),
    ("Glass, High Purity Fused Silica", 3.75, 0.0035, "[11]", "benign"),
    ("Denim", 1.6, 0.015, "[12]", "benign"),
    ("Red Leather", 2.2, 0.09, "[12]", "benign"),
    ("TNT", 2.84, 0.005, "[13]", "explosive"),
    ("PETN", 2.38, 0.02, "[13]", "explosive"),
    ("RDX", 2.60, 0.01, "[13]", "explosive"),
    ("C4", 3.28, 0.04, "[13]", "explosive"),
    ("Cocaine", 3.0, 0.01, "[13]", "contraband"),
    ("Ethanol", 4.5, 1.5, "[14]", "water-based"),
    ("Methanol 0.6 Mol Solution", 7.0, 7.0, "[14]", "water-based"),
    ("Water", 20.0, 30.0, "[16]", "water-based"),
    ("Paper", 2.35, 0.11, "[9]", "benign"),
    ("Dry Skin", 20.0, 16.0, "[17]", "biological"),
)


@lru_cache(maxsize=1)
def builtin_database() -> MaterialDatabase:
    return MaterialDatabase(tuple(
        MaterialRecord(name=name, permittivity=ComplexPermittivity(real, loss), source=src, category=cat)
        for name, real, loss, src, cat in BUILTIN_MATERIALS
    ))
