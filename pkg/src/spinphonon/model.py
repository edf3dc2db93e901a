"""Model parameters, free-boson mode energies, and staggered-charge sectors.

The system is one flavor of staggered fermions on an N-site periodic chain,
Yukawa-coupled to a free scalar field expanded in N momentum modes. Modes are
labeled m = 0..N-1 with momentum p_m = (2*pi/(N*b)) * (m - N/2), so the
zero-momentum mode sits at m = N/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path


class EmptySectorError(ValueError):
    """Requested charge sector contains no basis states."""


@dataclass(frozen=True)
class ModelParams:
    """Lattice and coupling parameters for one simulation instance.

    Cutoffs are per-mode maximum Fock occupations; mode m is simulated on the
    (cutoffs[m]+1)-dimensional truncated oscillator space.
    """

    n_sites: int
    lattice_spacing: float = 1.0
    fermion_mass: float = 1.0
    boson_mass: float = 1.0
    coupling: float = 0.0
    charge_sector: int = 0
    cutoffs: tuple[int, ...] = field(default=())
    trotter_dt: float = 0.5
    trotter_steps: int = 1

    def __post_init__(self) -> None:
        n = self.n_sites
        if n <= 0 or n % 2 != 0:
            raise ValueError(f"n_sites must be a positive even integer, got {n}")
        if self.lattice_spacing <= 0:
            raise ValueError("lattice_spacing must be > 0")
        if self.boson_mass < 0:
            raise ValueError("boson_mass must be >= 0")
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if abs(self.charge_sector) > n // 2:
            raise ValueError(
                f"charge_sector {self.charge_sector} outside [-{n // 2}, {n // 2}]"
            )
        if not self.cutoffs:
            object.__setattr__(self, "cutoffs", (8,) * n)
        if len(self.cutoffs) != n:
            raise ValueError(f"need {n} per-mode cutoffs, got {len(self.cutoffs)}")
        if any(c < 0 for c in self.cutoffs):
            raise ValueError("cutoffs must be non-negative")
        if self.trotter_dt <= 0:
            raise ValueError("trotter_dt must be > 0")
        if self.trotter_steps < 1:
            raise ValueError("trotter_steps must be >= 1")

    @property
    def boundary_sign(self) -> int:
        """Sign chi = (-1)^(Q+1) of the hopping term across the periodic boundary."""
        return -1 if self.charge_sector % 2 == 0 else 1

    def with_uniform_cutoff(self, cutoff: int) -> "ModelParams":
        return replace(self, cutoffs=(cutoff,) * self.n_sites)


@dataclass(frozen=True)
class ModeSpec:
    """One momentum mode of the free scalar field."""

    index: int
    energy: float
    momentum: float


def mode_momentum(params: ModelParams, m: int) -> float:
    if not 0 <= m < params.n_sites:
        raise IndexError(f"mode index {m} out of range for N={params.n_sites}")
    return (2.0 * math.pi / (params.n_sites * params.lattice_spacing)) * (
        m - params.n_sites / 2.0
    )


def mode_energy(params: ModelParams, m: int) -> float:
    """Single-particle energy sqrt(p_m^2 + m_phi^2) of mode m."""
    return math.hypot(mode_momentum(params, m), params.boson_mass)


def mode_specs(params: ModelParams) -> list[ModeSpec]:
    return [
        ModeSpec(m, mode_energy(params, m), mode_momentum(params, m))
        for m in range(params.n_sites)
    ]


def staggered_charge(state: int, n_sites: int) -> int:
    """Total staggered charge of an n_sites-bit computational basis state.

    Site j contributes ((-1)^(j+1) + z_j)/2 where z_j = +1 for bit 0 and
    -1 for bit 1. Bit 0 of the label is the leftmost (site-0) position, i.e.
    `state` reads as the ket |q_0 q_1 ... q_{N-1}> with q_0 most significant.
    """
    total = 0
    for j in range(n_sites):
        bit = (state >> (n_sites - 1 - j)) & 1
        z = 1 - 2 * bit
        total += ((-1) ** (j + 1) + z) // 2
    return total


def sector_states(n_sites: int, charge: int) -> list[int]:
    """All n_sites-qubit basis states with the given staggered charge, ascending.

    Ascending integer order coincides with lexicographic order of the
    bitstrings |q_0 q_1 ...>.
    """
    states = [s for s in range(1 << n_sites) if staggered_charge(s, n_sites) == charge]
    if not states:
        raise EmptySectorError(f"empty sector: no N={n_sites} state has Q={charge}")
    return states


def sector_basis(params: ModelParams) -> list[int]:
    """Basis states of the configured charge sector, in lexicographic order."""
    return sector_states(params.n_sites, params.charge_sector)


def bits_of(state: int, n_sites: int) -> str:
    return format(state, f"0{n_sites}b")


_CONFIG_KEYS = {
    "n_sites": int,
    "lattice_spacing": float,
    "fermion_mass": float,
    "boson_mass": float,
    "coupling": float,
    "charge_sector": int,
    "trotter_dt": float,
    "trotter_steps": int,
}


def parse_config(text: str) -> ModelParams:
    """Parse key=value configuration text into ModelParams.

    Accepts either `cutoff` (uniform) or `cutoffs` (comma-separated list).
    Lines starting with '#' and blank lines are ignored.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()

    kwargs: dict[str, object] = {}
    for key, conv in _CONFIG_KEYS.items():
        if key in raw:
            kwargs[key] = conv(raw.pop(key))
    if "n_sites" not in kwargs:
        raise ValueError("config must set n_sites")
    n = int(kwargs["n_sites"])

    cutoff = raw.pop("cutoff", None)
    cutoffs = raw.pop("cutoffs", None)
    if cutoff is not None and cutoffs is not None:
        raise ValueError("config sets both cutoff and cutoffs")
    if cutoff is not None:
        kwargs["cutoffs"] = (int(cutoff),) * n
    elif cutoffs is not None:
        kwargs["cutoffs"] = tuple(int(c) for c in cutoffs.split(","))
    if raw:
        raise ValueError(f"unknown config keys: {sorted(raw)}")
    return ModelParams(**kwargs)  # type: ignore[arg-type]


def load_config(path: str | Path) -> ModelParams:
    return parse_config(Path(path).read_text())


def dump_config(params: ModelParams) -> str:
    """Inverse of parse_config; round-trips through parse_config."""
    lines = [f"{key}={getattr(params, key)}" for key in _CONFIG_KEYS]
    if len(set(params.cutoffs)) == 1:
        lines.append(f"cutoff={params.cutoffs[0]}")
    else:
        lines.append("cutoffs=" + ",".join(str(c) for c in params.cutoffs))
    return "\n".join(lines) + "\n"
