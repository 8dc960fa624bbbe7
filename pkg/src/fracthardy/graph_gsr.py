"""Ground state representation on a finite weighted graph.

With a symmetric non-negative kernel ``k`` on n nodes, a positive ground
state ``omega`` and ``v = u / omega``, the energy

    E[u] = sum_{i,j} |u_i - u_j|^p k_ij

splits exactly as ``sum Phi_u(i,j) k_ij + sum V_i |u_i|^p`` with a pointwise
non-negative ``Phi_u``. All sums are finite, so no regularisation is needed.
Both orderings (i, j) and (j, i) are counted throughout.
"""

from dataclasses import dataclass

import numpy as np

from .constants import remainder_constant
from .errors import DimensionMismatch, InvalidParams, NonpositiveGroundState

__all__ = [
    "WeightedGraph",
    "GSRReport",
    "graph_energy",
    "weighted_energy",
    "induced_potential",
    "phi_matrix",
    "gsr_identity",
    "gsr_remainder_gap",
    "jacobi_case",
    "path_graph",
    "random_instance",
    "read_graph_file",
]


class WeightedGraph:
    """Dense symmetric weight matrix with zero diagonal."""

    def __init__(self, weights):
        w = np.array(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatch(f"weights must be square, got shape {w.shape}")
        if not np.allclose(w, w.T, rtol=0, atol=0):
            raise InvalidParams("weights must be symmetric")
        if np.any(w < 0) or np.any(np.diag(w) != 0):
            raise InvalidParams("weights must be non-negative with zero diagonal")
        w.setflags(write=False)
        self.weights = w

    @property
    def n(self):
        return self.weights.shape[0]

    @classmethod
    def from_edges(cls, n, edges):
        w = np.zeros((n, n))
        for i, j, x in edges:
            w[i, j] = w[j, i] = x
        return cls(w)

    def truncated(self, mask):
        """Copy with the edges where ``mask`` is false set to zero."""
        mask = np.asarray(mask, dtype=bool)
        keep = mask & mask.T
        return WeightedGraph(np.where(keep, self.weights, 0.0))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={int(np.count_nonzero(self.weights)) // 2})"


@dataclass(frozen=True)
class GSRReport:
    energy: float
    phi_sum: float
    potential_term: float
    phi_min: float

    @property
    def residual(self):
        return self.energy - self.phi_sum - self.potential_term

    @property
    def scale(self):
        return max(abs(self.energy), abs(self.phi_sum), abs(self.potential_term), 1e-300)


def _vec(g, x, name):
    x = np.asarray(x)
    if x.shape != (g.n,):
        raise DimensionMismatch(f"{name} has shape {x.shape}, graph has {g.n} nodes")
    return x


def _ground_state(g, omega):
    omega = _vec(g, omega, "omega")
    if np.iscomplexobj(omega):
        if np.any(omega.imag != 0):
            raise NonpositiveGroundState("omega must be real")
        omega = omega.real
    omega = omega.astype(float)
    if not np.all(omega > 0):
        raise NonpositiveGroundState("omega must be strictly positive")
    return omega


def _signed_pow(d, p):
    # d |d|^{p-2}, equal to 0 where d = 0
    ad = np.abs(d)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ad > 0, d * ad ** (p - 2.0), 0.0)


def graph_energy(g, u, p):
    u = _vec(g, u, "u")
    diff = np.abs(u[:, None] - u[None, :])
    return float(np.sum(diff ** p * g.weights))


def weighted_energy(g, omega, v, p):
    """sum |v_i - v_j|^p omega_i^{p/2} omega_j^{p/2} k_ij."""
    omega = _ground_state(g, omega)
    v = _vec(g, v, "v")
    diff = np.abs(v[:, None] - v[None, :])
    wt = np.outer(omega, omega) ** (p / 2.0)
    return float(np.sum(diff ** p * wt * g.weights))


def induced_potential(g, omega, p):
    """V_i = 2 omega_i^{1-p} sum_j (omega_i - omega_j) |omega_i - omega_j|^{p-2} k_ij."""
    omega = _ground_state(g, omega)
    d = omega[:, None] - omega[None, :]
    return 2.0 * omega ** (1.0 - p) * np.sum(_signed_pow(d, p) * g.weights, axis=1)


def phi_matrix(g, omega, u, p):
    """Phi_u(i, j) = |u_i - u_j|^p - (omega_i |v_i|^p - omega_j |v_j|^p)
    (omega_i - omega_j) |omega_i - omega_j|^{p-2}."""
    omega = _ground_state(g, omega)
    u = _vec(g, u, "u")
    v = u / omega
    a = omega * np.abs(v) ** p
    first = np.abs(u[:, None] - u[None, :]) ** p
    second = (a[:, None] - a[None, :]) * _signed_pow(omega[:, None] - omega[None, :], p)
    return first - second


def gsr_identity(g, omega, u, p):
    if p < 1:
        raise InvalidParams("p must be >= 1")
    omega = _ground_state(g, omega)
    u = _vec(g, u, "u")
    V = induced_potential(g, omega, p)
    phi = phi_matrix(g, omega, u, p)
    off = ~np.eye(g.n, dtype=bool)
    return GSRReport(
        energy=graph_energy(g, u, p),
        phi_sum=float(np.sum(phi * g.weights)),
        potential_term=float(np.sum(V * np.abs(u) ** p)),
        phi_min=float(np.min(phi[off])) if g.n > 1 else 0.0,
    )


def gsr_remainder_gap(g, omega, u, p, c_p=None):
    """E[u] - sum V |u|^p - c_p E_omega[u/omega]; non-negative for p >= 2."""
    if p < 2:
        raise InvalidParams("the remainder inequality needs p >= 2")
    if c_p is None:
        c_p = remainder_constant(p)
    omega = _ground_state(g, omega)
    u = _vec(g, u, "u")
    V = induced_potential(g, omega, p)
    lhs = graph_energy(g, u, p) - float(np.sum(V * np.abs(u) ** p))
    return lhs - c_p * weighted_energy(g, omega, u / omega, p)


def path_graph(n):
    w = np.zeros((n, n))
    idx = np.arange(n - 1)
    w[idx, idx + 1] = w[idx + 1, idx] = 1.0
    return WeightedGraph(w)


def jacobi_case(n, omega, u):
    """The p = 2 identity on the nearest-neighbour path graph, the discrete
    analogue of the ground state formula for Jacobi matrices."""
    return gsr_identity(path_graph(n), omega, u, 2.0)


def random_instance(n, rng, density=0.5):
    """Random (graph, omega, u): edge weights uniform in (0, 1] with the given
    density, omega log-uniform on [0.1, 10], u uniform in the complex disk of
    radius 10."""
    upper = np.triu(rng.random((n, n)) < density, 1)
    w = np.where(upper, 1.0 - rng.random((n, n)), 0.0)
    w = w + w.T
    omega = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    u = 10.0 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    return WeightedGraph(w), omega, u


def read_graph_file(path):
    """Parse lines ``i j w``, ``omega i value`` and ``u i re [im]``; ``#``
    starts a comment. Returns (graph, omega, u); missing omega entries default
    to 1 and missing u entries to 0."""
    edges, om, uu = [], {}, {}
    n = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            try:
                if line[0] == "omega":
                    i = int(line[1])
                    om[i] = float(line[2])
                elif line[0] == "u":
                    i = int(line[1])
                    im = float(line[3]) if len(line) > 3 else 0.0
                    uu[i] = complex(float(line[2]), im)
                else:
                    i, j = int(line[0]), int(line[1])
                    edges.append((i, j, float(line[2])))
                    n = max(n, j + 1)
            except (IndexError, ValueError) as exc:
                raise InvalidParams(f"{path}:{lineno}: cannot parse {raw.strip()!r}") from exc
            if i < 0:
                raise InvalidParams(f"{path}:{lineno}: negative node index")
            n = max(n, i + 1)
    if any(i == j for i, j, _ in edges):
        raise InvalidParams(f"{path}: self-loops are not allowed")
    g = WeightedGraph.from_edges(n, edges)
    omega = np.array([om.get(i, 1.0) for i in range(n)])
    u = np.array([uu.get(i, 0.0) for i in range(n)], dtype=complex)
    return g, omega, u
