from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..distance.configuration_distance import DistanceParams
from ..errors import InvalidInputError, SeriesParseError


@dataclass(frozen=True)
class ChangePointTruth:
    """Known change point parameters ``0 < theta_1 < ... < theta_kappa < 1``."""

    theta: Tuple[float, ...]

    def __post_init__(self):
        theta = tuple(float(v) for v in self.theta)
        object.__setattr__(self, "theta", theta)
        if not theta:
            raise InvalidInputError("at least one change point parameter is required")
        if any(not 0.0 < v < 1.0 for v in theta):
            raise InvalidInputError(f"change point parameters must lie in (0, 1), but got {theta}")
        if any(b <= a for a, b in zip(theta, theta[1:])):
            raise InvalidInputError(f"change point parameters must be strictly increasing, but got {theta}")

    @property
    def kappa(self) -> int:
        return len(self.theta)

    @property
    def lambda_min(self) -> float:
        edges = (0.0,) + self.theta + (1.0,)
        return min(b - a for a, b in zip(edges, edges[1:]))

    def change_indices(self, n: int) -> Tuple[int, ...]:
        """Change points ``floor(n * theta_k)``: the last index of each segment but the final one."""
        return tuple(int(n * v) for v in self.theta)

    @classmethod
    def from_positions(cls, positions: Sequence[int], n: int):
        return cls(theta=tuple(p / n for p in positions))


def iteration_weight(j: int) -> float:
    """Weight ``2**-j`` of the grids of iteration ``j``."""
    return 2.0**-j


@dataclass(frozen=True)
class GridSpec:
    """One ``(j, t)`` grid: boundaries ``n * alpha_j`` apart, offset by ``n * alpha_j / (t + 1)``."""

    n: int
    j: int
    t: int
    boundaries: Tuple[int, ...]

    @property
    def lambda_j(self) -> float:
        return 2.0**-self.j

    @property
    def alpha(self) -> float:
        return self.lambda_j / 3

    @property
    def weight(self) -> float:
        return iteration_weight(self.j)

    @property
    def spacing(self) -> float:
        return self.n / (3 * 2**self.j)

    def segments(self) -> List[Tuple[int, int]]:
        return list(zip(self.boundaries, self.boundaries[1:]))


@dataclass(frozen=True)
class GridRecord:
    j: int
    t: int
    weight: float
    gamma: float
    candidates: Tuple[int, ...] = ()
    skipped: Optional[str] = None


@dataclass(frozen=True)
class EstimateReport:
    n: int
    kappa: int
    theta_hat: Tuple[float, ...]
    eta: float
    grids: Tuple[GridRecord, ...]
    params: DistanceParams = field(default_factory=DistanceParams)
    seed: Optional[int] = None

    def change_indices(self) -> Tuple[int, ...]:
        """``floor(n * theta_hat_k)``, the same convention as ``ChangePointTruth``."""
        return tuple(int(self.n * v) for v in self.theta_hat)

    def to_text(self) -> str:
        def depth(value):
            return "auto" if value is None else str(value)

        lines = [
            "# changelib estimate report",
            f"n = {self.n}",
            f"kappa = {self.kappa}",
            f"theta_hat = {', '.join(repr(v) for v in self.theta_hat)}",
            f"change_indices = {', '.join(str(v) for v in self.change_indices())}",
            f"eta = {self.eta!r}",
            f"m_max = {depth(self.params.m_max)}",
            f"l_max = {depth(self.params.l_max)}",
            f"l_cap = {self.params.l_cap}",
            f"seed = {'none' if self.seed is None else self.seed}",
        ]
        for g in self.grids:
            line = (
                f"grid j={g.j} t={g.t} weight={g.weight!r} gamma={g.gamma!r} "
                f"candidates={','.join(str(c) for c in g.candidates)}"
            )
            if g.skipped:
                line += f" skipped={g.skipped}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str):
        header: Dict[str, str] = {}
        grids = []
        try:
            for raw in text.splitlines():
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("grid "):
                    fields = dict(item.split("=", 1) for item in line.split()[1:])
                    grids.append(
                        GridRecord(
                            j=int(fields["j"]),
                            t=int(fields["t"]),
                            weight=float(fields["weight"]),
                            gamma=float(fields["gamma"]),
                            candidates=tuple(int(c) for c in fields["candidates"].split(",") if c),
                            skipped=fields.get("skipped"),
                        )
                    )
                    continue
                key, value = (part.strip() for part in line.split("=", 1))
                header[key] = value

            def depth(key):
                return None if header[key] == "auto" else int(header[key])

            return cls(
                n=int(header["n"]),
                kappa=int(header["kappa"]),
                theta_hat=tuple(float(v) for v in header["theta_hat"].split(",")),
                eta=float(header["eta"]),
                grids=tuple(grids),
                params=DistanceParams(m_max=depth("m_max"), l_max=depth("l_max"), l_cap=int(header["l_cap"])),
                seed=None if header["seed"] == "none" else int(header["seed"]),
            )
        except (KeyError, ValueError) as e:
            raise SeriesParseError(f"malformed estimate report: {e}") from e
