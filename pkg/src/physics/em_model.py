"""
Normal-incidence forward model of a dielectric slab worn on skin.

Sign convention: permittivities are stored as (eps', eps'') with eps'' >= 0;
refractive_index() is the only place the -j is applied, giving the
decaying-wave branch n = sqrt(eps' - j eps'') with Re n >= 0, Im n <= 0.

Echo model: one bounce per interface, no multiple reflections and no
coherent interference between the front and back returns.
"""
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from src.materials.records import ComplexPermittivity
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

C0 = 2.99792458e8  # m/s
DB_PER_NEPER = 20.0 * math.log10(math.e)
DRY_SKIN = ComplexPermittivity(20.0, 16.0)
DEFAULT_FREQUENCY_GHZ = 30.0
DEFAULT_VISIBILITY_DB = 15.0


# ------------------------------ array kernels --------------------------------

def refractive_index(real, loss):
    """n = sqrt(real - j*loss) for scalars or numpy arrays (principal branch)."""
    eps = np.asarray(real, dtype=float) - 1j * np.asarray(loss, dtype=float)
    return np.sqrt(eps)


def interface_reflection(n1, n2):
    """Normal-incidence Fresnel coefficient going from index n1 into n2."""
    return (n1 - n2) / (n1 + n2)


def reflectivity(real, loss):
    """|Gamma|^2 of an air/half-space interface, vectorised."""
    return np.abs(interface_reflection(1.0, refractive_index(real, loss))) ** 2


# ------------------------------ scalar wrappers ------------------------------

def complex_sqrt_permittivity(p: ComplexPermittivity) -> complex:
    return complex(refractive_index(p.real, p.loss))


def halfspace_reflection(p: ComplexPermittivity) -> complex:
    return complex(interface_reflection(1.0, complex_sqrt_permittivity(p)))


def halfspace_reflectivity(p: ComplexPermittivity) -> float:
    return abs(halfspace_reflection(p)) ** 2


def attenuation_db_per_mm(p: ComplexPermittivity, frequency_ghz: float = DEFAULT_FREQUENCY_GHZ) -> float:
    """One-way plane-wave power decay through the medium, in dB per millimetre."""
    if not frequency_ghz > 0:
        raise DomainError(f"frequency must be > 0 GHz (got {frequency_ghz})")
    k0 = 2.0 * math.pi * frequency_ghz * 1e9 / C0
    alpha = k0 * abs(complex_sqrt_permittivity(p).imag)  # Np/m
    return DB_PER_NEPER * alpha * 1e-3


def skin_relative_ratio(front_power: float, reference: ComplexPermittivity = DRY_SKIN) -> float:
    if front_power < 0:
        raise DomainError(f"front reflectivity power must be >= 0 (got {front_power})")
    ref_power = halfspace_reflectivity(reference)
    if ref_power == 0.0:
        raise DomainError(f"reference {reference} does not reflect; cannot normalise against it")
    return front_power / ref_power


# --------------------------------- slab --------------------------------------

@dataclass(frozen=True)
class SlabScene:
    slab: ComplexPermittivity
    thickness_mm: float
    backing: ComplexPermittivity = field(default=DRY_SKIN)
    frequency_ghz: float = DEFAULT_FREQUENCY_GHZ

    def __post_init__(self):
        if not self.thickness_mm > 0:
            raise DomainError(f"slab thickness must be > 0 mm (got {self.thickness_mm})")
        if not self.frequency_ghz > 0:
            raise DomainError(f"frequency must be > 0 GHz (got {self.frequency_ghz})")
        for label, p in (("slab", self.slab), ("backing", self.backing)):
            if not p.is_bulk:
                raise DomainError(f"{label} eps' must be >= 1 (got {p.real})")


@dataclass(frozen=True)
class EchoSummary:
    front_reflectivity_power: float
    back_echo_power: float
    two_way_loss_db: float
    back_surface_visible: bool
    skin_relative_ratio: float

    def to_dict(self):
        return asdict(self)


def slab_response(scene: SlabScene,
                  reference: ComplexPermittivity = DRY_SKIN,
                  visibility_threshold_db: float = DEFAULT_VISIBILITY_DB) -> EchoSummary:
    """
    Front echo off the air/slab face and back echo off the slab/backing face.

    The back echo is scaled by two passes through the front face and by the
    two-way propagation loss in the slab. The back surface counts as visible
    when its echo is within `visibility_threshold_db` of the bare reference
    (skin) return.
    """
    n_slab = complex_sqrt_permittivity(scene.slab)
    n_back = complex_sqrt_permittivity(scene.backing)

    front = abs(interface_reflection(1.0, n_slab)) ** 2
    inner = abs(interface_reflection(n_slab, n_back)) ** 2
    two_way_db = 2.0 * scene.thickness_mm * attenuation_db_per_mm(scene.slab, scene.frequency_ghz)
    back = inner * (1.0 - front) ** 2 * 10.0 ** (-two_way_db / 10.0)

    ref_power = halfspace_reflectivity(reference)
    visible = back >= 10.0 ** (-visibility_threshold_db / 10.0) * ref_power
    ratio = skin_relative_ratio(front, reference)

    logger.debug("slab %s @ %.3g mm: front=%.4g back=%.4g loss=%.3g dB visible=%s",
                 scene.slab, scene.thickness_mm, front, back, two_way_db, visible)
    return EchoSummary(
        front_reflectivity_power=float(front),
        back_echo_power=float(back),
        two_way_loss_db=float(two_way_db),
        back_surface_visible=bool(visible),
        skin_relative_ratio=float(ratio),
    )
