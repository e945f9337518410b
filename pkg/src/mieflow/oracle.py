"""Dense statevector reference for small systems (<= 14 two-level or small-qudit sites).

Everything here is brute force on purpose: reduced density matrices via
reshape+SVD, measurement by explicit projection, Born averages by full
outcome enumeration.  The fast modules (gaussian, stabilizer, singlets)
are validated against this one.

Conventions
-----------
* Site 0 is the leftmost tensor factor; basis index = sum_i n_i * prod(dims[i+1:]).
* All entropies are in nats (natural log); "log 2" means ln 2.
* Fermionic utilities use the Jordan-Wigner convention
  c_j = (prod_{k<j} Z_k) sigma^-_j, Fock states ordered by ascending site index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

EPS_NORM = 1e-12
ZERO_PROB = 1e-14


@dataclass
class StateVector:
    """Pure state of a small qudit chain as a dense amplitude vector."""

    num_sites: int
    local_dims: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        self.local_dims = tuple(int(d) for d in self.local_dims)
        dim = int(np.prod(self.local_dims))
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if len(self.local_dims) != self.num_sites:
            raise ValueError("local_dims length must equal num_sites")
        if amps.size != dim:
            raise ValueError(f"amplitude vector has length {amps.size}, expected {dim}")
        self.amplitudes = amps

    @classmethod
    def qubits(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(np.log2(amps.size))
        if 2**n != amps.size:
            raise ValueError("amplitude length is not a power of two")
        return cls(n, (2,) * n, amps)

    def norm_error(self) -> float:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.local_dims)


@dataclass
class ProductBasis:
    """Measurement frame: disjoint site blocks, one unitary per block.

    Each block is (sites, U) with U a d x d unitary whose *columns* are the
    outcome states; outcome k of a block projects onto U[:, k].  Blocks of
    size one are ordinary single-site frames, blocks of size two cover Bell
    frames.  Outcome enumeration is lexicographic over blocks ordered by
    their first site.
    """

    blocks: list = field(default_factory=list)

    def __post_init__(self):
        blocks = []
        for sites, u in self.blocks:
            sites = tuple(int(s) for s in sites)
            u = np.asarray(u, dtype=complex)
            d = u.shape[0]
            if u.shape != (d, d):
                raise ValueError("frame unitary must be square")
            if np.max(np.abs(u.conj().T @ u - np.eye(d))) > 1e-12:
                raise ValueError("frame is not unitary to 1e-12")
            blocks.append((sites, u))
        blocks.sort(key=lambda b: b[0][0])
        seen = set()
        for sites, _ in blocks:
            if seen & set(sites):
                raise ValueError("measurement blocks overlap")
            seen |= set(sites)
        self.blocks = blocks

    @property
    def sites(self) -> tuple:
        return tuple(sorted(s for sites, _ in self.blocks for s in sites))

    def outcome_iter(self):
        """Iterate outcome tuples, lexicographic over blocks."""
        return itertools.product(*(range(u.shape[0]) for _, u in self.blocks))


# frame vectors over two qubits ordered |00>,|01>,|10>,|11>;
# columns: singlet, triplet-0, (00-11)/sqrt2, (00+11)/sqrt2
BELL_FRAME = np.array(
    [
        [0, 0, 1, 1],
        [1, 1, 0, 0],
        [-1, 1, 0, 0],
        [0, 0, -1, 1],
    ],
    dtype=complex,
) / np.sqrt(2.0)

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def z_basis(sites, dims=None) -> ProductBasis:
    """Computational (occupation / S^z) basis frame on the given sites."""
    sites = list(sites)
    if dims is None:
        dims = [2] * len(sites)
    return ProductBasis([((s,), np.eye(d)) for s, d in zip(sites, dims)])


def x_basis(sites, dims=None) -> ProductBasis:
    """X eigenbasis: Hadamard columns for qubits, Fourier columns for qudits."""
    sites = list(sites)
    if dims is None:
        dims = [2] * len(sites)
    blocks = []
    for s, d in zip(sites, dims):
        u = _HADAMARD if d == 2 else fourier_frame(d)
        blocks.append(((s,), u))
    return ProductBasis(blocks)


def fourier_frame(d: int) -> np.ndarray:
    """Columns |chi_k> = (1/sqrt d) sum_g omega^{kg} |g>, the X eigenbasis."""
    om = np.exp(2j * np.pi / d)
    g, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return om ** (g * k) / np.sqrt(d)


def bell_basis(pairs) -> ProductBasis:
    """Bell frames on the given (i, j) qubit pairs, singlet first."""
    return ProductBasis([((int(i), int(j)), BELL_FRAME) for i, j in pairs])


def random_product_basis(sites, rng, dims=None) -> ProductBasis:
    """Haar-random single-site frames, for 'any basis' property checks."""
    sites = list(sites)
    if dims is None:
        dims = [2] * len(sites)
    blocks = []
    for s, d in zip(sites, dims):
        z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        blocks.append(((s,), q))
    return ProductBasis(blocks)


def ground_state(hamiltonian) -> StateVector:
    """Lowest eigenvector of a dense Hermitian matrix as a qubit StateVector.

    Deterministic phase fix: the largest-magnitude component (smallest index
    on ties) is made real and positive.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("hamiltonian must be square")
    if h.shape[0] > 2**14:
        raise ValueError("dimension exceeds 2^14; use a structured module instead")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > 1e-10 * scale:
        raise ValueError("hamiltonian is not Hermitian")
    vals, vecs = np.linalg.eigh(h)
    v = vecs[:, 0]
    mags = np.abs(v)
    idx = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    v = v * (v[idx].conjugate() / mags[idx])
    return StateVector.qubits(v)


def _block_axes_first(tensor, sites, num_sites):
    rest = [i for i in range(num_sites) if i not in sites]
    return np.transpose(tensor, list(sites) + rest), rest


def project_block(state: StateVector, sites, unitary, outcome: int):
    """Project a block of sites onto frame column `outcome`.

    Returns (post_state, probability).  The measured sites stay in the
    state, pinned to the outcome frame vector.  A zero-probability outcome
    yields (None, 0.0) rather than raising.
    """
    sites = tuple(int(s) for s in sites)
    u = np.asarray(unitary, dtype=complex)
    dblock = int(np.prod([state.local_dims[s] for s in sites]))
    if u.shape[0] != dblock:
        raise ValueError("frame dimension does not match block")
    if not 0 <= outcome < dblock:
        raise ValueError("outcome out of range")
    tensor = state.tensor()
    moved, rest = _block_axes_first(tensor, sites, state.num_sites)
    flat = moved.reshape(dblock, -1)
    vec = u[:, outcome]
    proj = vec.conj() @ flat
    p = float(np.vdot(proj, proj).real)
    if p < ZERO_PROB:
        return None, 0.0
    post_flat = np.outer(vec, proj / np.sqrt(p))
    post = post_flat.reshape([state.local_dims[s] for s in sites] + [state.local_dims[r] for r in rest])
    inv = np.argsort(list(sites) + rest)
    post = np.transpose(post, inv)
    return StateVector(state.num_sites, state.local_dims, post.ravel()), p


def project_site(state: StateVector, site: int, frame, outcome: int):
    """Single-site version of project_block; `frame` may be a matrix or a ProductBasis."""
    if isinstance(frame, ProductBasis):
        for sites, u in frame.blocks:
            if site in sites:
                return project_block(state, sites, u, outcome)
        raise ValueError(f"site {site} not covered by frame")
    return project_block(state, (site,), frame, outcome)


def entropy(state: StateVector, region) -> float:
    """Von Neumann entanglement entropy (nats) of the reduced state on `region`."""
    region = tuple(sorted(int(s) for s in region))
    if any(s < 0 or s >= state.num_sites for s in region):
        raise ValueError("region outside the chain")
    if len(region) == 0 or len(region) == state.num_sites:
        return 0.0
    tensor = state.tensor()
    moved, rest = _block_axes_first(tensor, region, state.num_sites)
    da = int(np.prod([state.local_dims[s] for s in region]))
    flat = moved.reshape(da, -1)
    sing = np.linalg.svd(flat, compute_uv=False)
    lam = np.clip(sing**2, 0.0, 1.0)
    lam = lam[lam > 1e-16]
    return float(-np.sum(lam * np.log(lam)))


def mutual_information(state: StateVector, region_a, region_b) -> float:
    a = tuple(sorted(region_a))
    b = tuple(sorted(region_b))
    if set(a) & set(b):
        raise ValueError("regions overlap")
    return entropy(state, a) + entropy(state, b) - entropy(state, a + b)


def _check_partition(num_sites, a, b, m):
    a, b, m = set(a), set(b), set(m)
    if a & b or a & m or b & m:
        raise ValueError("regions A, B, M must be disjoint")
    if a | b | m != set(range(num_sites)):
        raise ValueError("regions A, B, M must partition the sites")


def project_outcome(state: StateVector, basis: ProductBasis, outcome):
    """Project all basis blocks on their outcomes; returns (state|None, joint probability)."""
    post, ptot = state, 1.0
    for (sites, u), k in zip(basis.blocks, outcome):
        post, p = project_block(post, sites, u, k)
        ptot *= p
        if post is None:
            return None, 0.0
    return post, ptot


def born_distribution(state: StateVector, basis: ProductBasis):
    """Joint Born probabilities of all outcomes, lexicographic block order."""
    out = {}
    for outcome in basis.outcome_iter():
        _, p = project_outcome(state, basis, outcome)
        out[outcome] = p
    return out


def mie_mii_exact(state: StateVector, regions, basis: ProductBasis, full_output=False):
    """Exact MIE(A) and MII(A, B) by enumeration over all measurement outcomes of M.

    MIE   = sum_m p_m S(A)[psi_m]
    MII   = sum_m p_m I(A,B)[psi_m] - I(A,B)[psi]

    `regions` is any object with .a, .b, .m attributes (RegionSpec) or an
    (A, B, M) triple.  The basis must cover exactly M.
    """
    if hasattr(regions, "a"):
        a, b, m = regions.a, regions.b, regions.m
    else:
        a, b, m = regions
    _check_partition(state.num_sites, a, b, m)
    if tuple(sorted(m)) != basis.sites:
        raise ValueError("measurement basis must cover exactly M")
    i_pre = mutual_information(state, a, b)
    mie = 0.0
    avg_i = 0.0
    total_p = 0.0
    for outcome in basis.outcome_iter():
        post, p = project_outcome(state, basis, outcome)
        if post is None:
            continue
        total_p += p
        mie += p * entropy(post, a)
        avg_i += p * mutual_information(post, a, b)
    mii = avg_i - i_pre
    if full_output:
        return {
            "mie": mie,
            "mii": mii,
            "avg_post_mi": avg_i,
            "pre_mi": i_pre,
            "total_probability": total_p,
        }
    return mie, mii


@dataclass
class LocalOp:
    """Operator matrix supported on an ordered tuple of sites."""

    sites: tuple
    matrix: np.ndarray

    def __post_init__(self):
        self.sites = tuple(int(s) for s in self.sites)
        self.matrix = np.asarray(self.matrix, dtype=complex)


def apply_local(state: StateVector, op: LocalOp) -> StateVector:
    tensor = state.tensor()
    moved, rest = _block_axes_first(tensor, op.sites, state.num_sites)
    d = int(np.prod([state.local_dims[s] for s in op.sites]))
    flat = op.matrix @ moved.reshape(d, -1)
    out = flat.reshape([state.local_dims[s] for s in op.sites] + [state.local_dims[r] for r in rest])
    inv = np.argsort(list(op.sites) + rest)
    return StateVector(state.num_sites, state.local_dims, np.transpose(out, inv).ravel())


def strange_correlator(state: StateVector, reference: StateVector, op_a: LocalOp, op_b: LocalOp, connected=False):
    """<ref|O_A O_B|psi> / <ref|psi>; optionally subtract the one-operator terms.

    Raises ValueError when the reference overlap magnitude is below 1e-12.
    """
    ov = complex(np.vdot(reference.amplitudes, state.amplitudes))
    if abs(ov) < EPS_NORM:
        raise ValueError("reference overlap with the state vanishes")

    def insert(*ops):
        cur = state
        for op in ops:
            cur = apply_local(cur, op)
        return complex(np.vdot(reference.amplitudes, cur.amplitudes)) / ov

    sc = insert(op_b, op_a)
    if not connected:
        return sc
    return sc - insert(op_a) * insert(op_b)


@dataclass
class BoundReport:
    mie: float
    bound: float
    obar_a: float
    obar_b: float
    satisfied: bool


def block_product_state(num_sites, local_dims, blocks) -> StateVector:
    """Full state from block factors [(sites, vector), ...] covering all sites."""
    all_sites = [s for sites, _ in blocks for s in sites]
    if sorted(all_sites) != list(range(num_sites)):
        raise ValueError("block factors must cover every site exactly once")
    vec = np.array([1.0 + 0j])
    for _, v in blocks:
        vec = np.kron(vec, np.asarray(v, dtype=complex).ravel())
    dims_in_order = [local_dims[s] for sites, _ in blocks for s in sites]
    tensor = vec.reshape(dims_in_order)
    inv = np.argsort(all_sites)
    return StateVector(num_sites, local_dims, np.transpose(tensor, inv).ravel())


def check_sc_bound(state: StateVector, regions, basis_m: ProductBasis, ref_a, ref_b, op_a: LocalOp, op_b: LocalOp) -> BoundReport:
    """MIE(A) against the Born-weighted squared strange-correlator sum.

    bound = c0 * sum_{m_c} (p_{m_a m_b m_c}^2 / p_{m_c}) |SC|^2 with
    c0 = 1 / (2 obar_A^2 obar_B^2) and obar^2 = <m|O O^dag|m> (the squared
    norm of O^dag|m>, which is what the norm inequality behind the bound
    actually uses; the literal diagonal matrix element vanishes for charged
    operators and would make the bound degenerate).
    """
    if hasattr(regions, "a"):
        a, b, m = regions.a, regions.b, regions.m
    else:
        a, b, m = regions
    _check_partition(state.num_sites, a, b, m)
    a, b = tuple(sorted(a)), tuple(sorted(b))
    ref_a = np.asarray(ref_a, dtype=complex).ravel()
    ref_b = np.asarray(ref_b, dtype=complex).ravel()
    obar_a2 = float(np.linalg.norm(op_a.matrix.conj().T @ ref_a) ** 2)
    obar_b2 = float(np.linalg.norm(op_b.matrix.conj().T @ ref_b) ** 2)
    if obar_a2 < EPS_NORM or obar_b2 < EPS_NORM:
        raise ValueError("degenerate bound: O^dag annihilates the reference state")

    numerator_state = apply_local(apply_local(state, op_b), op_a)
    mie = 0.0
    weighted = 0.0
    for outcome in basis_m.outcome_iter():
        post, p_mc = project_outcome(state, basis_m, outcome)
        if post is None:
            continue
        mie += p_mc * entropy(post, a)
        blocks = [(a, ref_a), (b, ref_b)]
        blocks += [(sites, u[:, k]) for (sites, u), k in zip(basis_m.blocks, outcome)]
        ref_full = block_product_state(state.num_sites, state.local_dims, blocks)
        ov = complex(np.vdot(ref_full.amplitudes, state.amplitudes))
        p_abc = abs(ov) ** 2
        if p_abc < ZERO_PROB:
            continue
        sc = complex(np.vdot(ref_full.amplitudes, numerator_state.amplitudes)) / ov
        weighted += (p_abc**2 / p_mc) * abs(sc) ** 2
    bound = weighted / (2.0 * obar_a2 * obar_b2)
    return BoundReport(mie=mie, bound=bound, obar_a=np.sqrt(obar_a2), obar_b=np.sqrt(obar_b2), satisfied=mie >= bound - 1e-12)


# ---------------------------------------------------------------------------
# Fermionic (Jordan-Wigner) utilities
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _occupation_table(L: int) -> np.ndarray:
    idx = np.arange(2**L, dtype=np.int64)
    return (idx[:, None] >> np.arange(L - 1, -1, -1)[None, :]) & 1


def annihilate(amps: np.ndarray, L: int, j: int) -> np.ndarray:
    """Apply c_j with Jordan-Wigner signs to a dense qubit amplitude vector."""
    occ = _occupation_table(L)
    out = np.zeros_like(amps)
    src = occ[:, j] == 1
    signs = (-1.0) ** occ[src, :j].sum(axis=1)
    target = np.flatnonzero(src) - (1 << (L - 1 - j))
    out[target] = signs * amps[src]
    return out


def correlation_matrix(state: StateVector) -> np.ndarray:
    """C_ij = <c^dag_i c_j> of a dense fermionic (qubit, JW) state."""
    L = state.num_sites
    if state.local_dims != (2,) * L:
        raise ValueError("correlation_matrix expects qubit states")
    cols = np.column_stack([annihilate(state.amplitudes, L, j) for j in range(L)])
    return cols.conj().T @ cols


def slater_statevector(orbitals: np.ndarray) -> StateVector:
    """Dense Fock-space Slater determinant from an L x N orthonormal orbital matrix."""
    u = np.asarray(orbitals, dtype=complex)
    L, N = u.shape
    amps = np.zeros(2**L, dtype=complex)
    for sites in itertools.combinations(range(L), N):
        idx = sum(1 << (L - 1 - s) for s in sites)
        amps[idx] = np.linalg.det(u[list(sites), :])
    nrm = np.linalg.norm(amps)
    return StateVector.qubits(amps / nrm)


def singlet_statevector(L: int, matching) -> StateVector:
    """Product of two-qubit singlets (|01> - |10>)/sqrt2 on the matched pairs."""
    pairs = [tuple(sorted(p)) for p in matching]
    covered = sorted(s for p in pairs for s in p)
    if covered != list(range(L)):
        raise ValueError("matching must cover every site exactly once")
    amps = np.zeros(2**L, dtype=complex)
    occ = _occupation_table(L)
    scale = (1.0 / np.sqrt(2.0)) ** len(pairs)
    for idx in range(2**L):
        coeff = 1.0
        for i, j in pairs:
            ni, nj = occ[idx, i], occ[idx, j]
            if ni == nj:
                coeff = 0.0
                break
            coeff *= 1.0 if (ni, nj) == (0, 1) else -1.0
        if coeff:
            amps[idx] = coeff * scale
    return StateVector.qubits(amps)


def stabilizer_statevector(p: int, n: int, xmat, zmat, phases) -> StateVector:
    """Dense qudit state stabilized by the GF(p) generators (x|z) with phase exponents.

    Generator g = mu^t prod_j X_j^{x_j} Z_j^{z_j} with mu = i for p = 2
    (t mod 4) and mu = exp(2 pi i / p) for odd p (t mod p).  Builds the
    projector product prod_g (1/p sum_k g^k) applied to reference states.
    """
    xmat = np.asarray(xmat, dtype=np.int64) % p
    zmat = np.asarray(zmat, dtype=np.int64) % p
    phases = np.asarray(phases, dtype=np.int64)
    dim = p**n
    digits = _digit_table(p, n)

    def apply_gen(vec, x, z, t):
        if p == 2:
            mu_t = 1j ** (int(t) % 4)
            sign = (-1.0) ** ((digits @ z) % 2)
        else:
            om = np.exp(2j * np.pi / p)
            mu_t = om ** (int(t) % p)
            sign = np.exp(2j * np.pi * ((digits @ z) % p) / p)
        # X^x acts as digit shift: X|g> = |g+1>; amplitude at digit d comes from d - x
        shifted = (digits - x[None, :]) % p
        src = shifted @ (p ** np.arange(n - 1, -1, -1))
        return mu_t * sign * vec[src]

    rng = np.random.default_rng(7)
    for attempt in range(8):
        if attempt == 0:
            vec = np.zeros(dim, dtype=complex)
            vec[0] = 1.0
        else:
            vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            vec /= np.linalg.norm(vec)
        for x, z, t in zip(xmat, zmat, phases):
            acc = vec.copy()
            cur = vec
            for _ in range(p - 1):
                cur = apply_gen(cur, x, z, t)
                acc = acc + cur
            vec = acc / p
        nrm = np.linalg.norm(vec)
        if nrm > 1e-8:
            dims = (p,) * n
            return StateVector(n, dims, vec / nrm)
    raise RuntimeError("projector annihilated every reference state tried")


def _digit_table(p: int, n: int) -> np.ndarray:
    idx = np.arange(p**n, dtype=np.int64)
    out = np.empty((p**n, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = idx % p
        idx //= p
    return out
