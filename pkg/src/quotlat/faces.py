"""Traversal of the bounded face attached to a realizable code.

A feasible search lands on a vertex of the face cut out of the norm-1
region by the affine slice.  From a vertex, the tangent cone is described
by the tight vectors; converting that description to extreme rays (double
description) and walking each ray to the next vertex enumerates the whole
face.  The barycenter of all vertices is a relative interior point and
carries the invariants of the class: half kissing number s, perfection
rank r, and the sublattice count s'.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .exact import QONE, QZERO, evaluate, ldlt, qify, quad_functional, rank, vec_to_sym
from .feasibility import CodeGeometry, FaceSpace, face_space
from .lattices import GramMatrix, kissing_half, perfection_rank, \
    shortest_vectors, sublattice_gram


# ---------------------------------------------------------------------------
# double description for pointed cones {y : A y >= 0}
# ---------------------------------------------------------------------------

def _normalize_ray(r):
    den = lcm(*[int(x.denominator) for x in r])
    v = [int(x * den) for x in r]
    g = gcd(*[abs(x) for x in v])
    return tuple(x // (g or 1) for x in v)


def _scaled_reduce(r):
    """Primitive rational rescaling of a ray (entries kept as mpq ints)."""
    if not any(r):
        return [qify(0) for _ in r]
    return [qify(x) for x in _normalize_ray(r)]


def extreme_rays_of_cone(rows, dim):
    """Extreme rays of {y in Q^dim : row . y >= 0 for all rows}.

    Incremental double description with explicit lineality handling; the
    second return value is a basis of the lineality space (empty exactly
    when the cone is pointed).  Adjacency is decided combinatorially via
    recomputed tight sets, so every arithmetic step stays rational.
    """
    lineality = [[QONE if i == j else QZERO for j in range(dim)]
                 for i in range(dim)]
    rays = []  # (vector, tight-bitmask over processed constraint indices)
    seen = set()
    processed = []

    def tight_mask(v):
        mask = 0
        for i, r in enumerate(processed):
            if sum(a * b for a, b in zip(r, v)) == 0:
                mask |= 1 << i
        return mask

    for raw in rows:
        row = [qify(x) for x in raw]
        if not any(row):
            continue
        lead = next(x for x in row if x)
        key = tuple(x / lead for x in row) + ((lead > 0),)
        if key in seen:
            continue
        seen.add(key)
        idx = len(processed)
        processed.append(row)

        def val(v):
            return sum(a * b for a, b in zip(row, v))

        p = next((i for i, l in enumerate(lineality) if val(l)), None)
        if p is not None:
            pivot = lineality.pop(p)
            if val(pivot) < 0:
                pivot = [-x for x in pivot]
            pv = val(pivot)
            lineality = [_scaled_reduce([a - (val(l) / pv) * b
                                         for a, b in zip(l, pivot)])
                         for l in lineality]
            projected = [_scaled_reduce([a - (val(v) / pv) * b
                                         for a, b in zip(v, pivot)])
                         for v, _ in rays]
            rays = [(w, tight_mask(w)) for w in projected]
            pivot = _scaled_reduce(pivot)
            rays.append((pivot, tight_mask(pivot)))
            continue
        plus, zero, minus = [], [], []
        for v, tight in rays:
            s = val(v)
            if s > 0:
                plus.append((v, tight))
            elif s == 0:
                zero.append((v, tight | (1 << idx)))
            else:
                minus.append((v, tight))
        if not minus:
            rays = plus + zero
            continue
        combos = []
        for vp, tp in plus:
            for vm, tm in minus:
                cap = tp & tm
                if any(t & cap == cap for v, t in rays
                       if v is not vp and v is not vm):
                    continue
                w = _scaled_reduce([val(vp) * b - val(vm) * a
                                    for a, b in zip(vp, vm)])
                combos.append((w, tight_mask(w)))
        rays = plus + zero + combos
    return [v for v, _ in rays], lineality


# ---------------------------------------------------------------------------
# walking a ray to the neighboring vertex
# ---------------------------------------------------------------------------

class RayEscape(RuntimeError):
    """A ray left the face without meeting a new vertex (consistency error)."""


def _min_and_set(rows, bound, stop_below=None):
    gram = GramMatrix(rows, check=False)
    short = shortest_vectors(gram, bound, stop_below=stop_below)
    if not short:
        return None, []
    mn = min(v for _, v in short)
    return mn, [x for x, v in short if v == mn]


def neighbor_vertex(space: FaceSpace, y, ray, doubling_cap=512):
    """Step width rho > 0 and the neighboring vertex along an extreme ray.

    Two-phase exact search: geometric scan for an interval around the
    breakpoint, then bisection in which the upper end is snapped to the
    exact crossing value of a newly minimal vector, so the result is the
    first parameter where the minimal-vector set grows.
    """
    base = space.gram_rows(y)
    base_min, base_set = _min_and_set(base, QONE)
    base_keys = set(base_set)

    def rows_at(t):
        yy = [a + t * b for a, b in zip(y, ray)]
        return space.gram_rows(yy)

    ray_rows = _ray_rows(space, ray)
    lo, up = QZERO, QONE
    for _ in range(doubling_cap):
        rows = rows_at(up)
        if ldlt(rows, want_witness=False).status == "posdef":
            mn, _ = _min_and_set(rows, base_min, stop_below=base_min)
            if mn is not None and mn < base_min:
                break
            lo, up = up, 2 * up
        else:
            up = (lo + up) / 2
    else:
        raise RayEscape("no breakpoint within doubling cap")

    for _ in range(100000):
        rows = rows_at(lo)
        mn, cur = _min_and_set(rows, base_min)
        if mn is None:
            raise RayEscape("minimum rose along a face ray")
        if mn == base_min and not set(cur) <= base_keys:
            break
        # snap: if the upper end itself is feasible it is the breakpoint
        rows_u = rows_at(up)
        if ldlt(rows_u, want_witness=False).status == "posdef":
            mn_u, _ = _min_and_set(rows_u, base_min, stop_below=base_min)
            if mn_u is not None and mn_u >= base_min:
                lo = up
                continue
        gamma = (lo + up) / 2
        rows_g = rows_at(gamma)
        if ldlt(rows_g, want_witness=False).status == "posdef":
            # a partial enumeration suffices: its argmin is a vector whose
            # exact crossing value bounds the breakpoint from above
            mn_g, set_g = _min_and_set(rows_g, base_min, stop_below=base_min)
        else:
            mn_g, set_g = -QONE, []
        if mn_g is not None and mn_g >= base_min:
            lo = gamma
        else:
            cands = [gamma]
            for x in set_g:
                gx = _form_value(base, x)
                rx = _form_value(ray_rows, x)
                if rx < 0:
                    cands.append((base_min - gx) / rx)
            up = min(cands)
    else:
        raise RayEscape("breakpoint search did not converge")
    rho = lo
    return rho, [a + rho * b for a, b in zip(y, ray)]


def _ray_rows(space: FaceSpace, ray):
    g = [QZERO] * len(space.offset)
    for c, Z in zip(ray, space.directions):
        if c:
            g = [a + c * b for a, b in zip(g, Z)]
    return vec_to_sym(g, space.n)


def _form_value(rows, x):
    return evaluate(rows, x)


# ---------------------------------------------------------------------------
# full face traversal
# ---------------------------------------------------------------------------

@dataclass
class FaceDescription:
    space: FaceSpace
    vertex_ys: list
    vertices: list              # GramMatrix per vertex
    edges: list                 # index pairs
    barycenter: GramMatrix
    polytope_dim: int           # dimension of the traversed polytope
    s: int
    r: int
    s_prime: int | None
    complete: bool

    @property
    def face_dim(self) -> int:
        """Dimension of the full face of the norm-1 region (from the rank
        of the minimal projections at an interior point)."""
        n = self.barycenter.n
        return n * (n + 1) // 2 - self.r


def _tangent_cone(space: FaceSpace, y):
    rows_g = space.gram_rows(y)
    short = shortest_vectors(GramMatrix(rows_g, check=False), QONE)
    rows = []
    for x, val in short:
        if val == QONE:
            ell = quad_functional(x)
            rows.append([sum(a * b for a, b in zip(ell, Z))
                         for Z in space.directions])
    return extreme_rays_of_cone(rows, space.dim)


def extreme_rays(space: FaceSpace, y):
    """Extreme rays of the tangent cone of the face at the given vertex."""
    rays, lineality = _tangent_cone(space, y)
    if lineality:
        raise RayEscape("seed point is not a vertex of the face")
    return rays


def descend_to_vertex(space: FaceSpace, y):
    """Walk from any point of the face down to one of its vertices.

    While the tangent cone has lineality, the point is interior to a
    positive-dimensional subface; walking to the breakpoint along a
    lineality direction adds at least one tight vector, so the dimension
    strictly drops and the loop ends at a vertex.
    """
    for _ in range(space.dim + 1):
        _, lineality = _tangent_cone(space, y)
        if not lineality:
            return y
        _, y = neighbor_vertex(space, y, lineality[0])
    raise RayEscape("descent failed to reach a vertex")


def traverse_face(space: FaceSpace, seed: GramMatrix,
                  geometry: CodeGeometry | None = None,
                  budget=512) -> FaceDescription:
    """All vertices of the bounded face containing the seed vertex."""
    y0 = space.coords_of(seed.mat)
    if y0 is None:
        raise ValueError("seed Gram matrix does not lie on the face slice")
    y0 = descend_to_vertex(space, y0)
    key0 = tuple(y0)
    ys = {key0: 0}
    order = [list(y0)]
    edges = set()
    queue = [0]
    complete = True
    while queue:
        i = queue.pop()
        y = order[i]
        for ray in extreme_rays(space, y):
            _, ynew = neighbor_vertex(space, y, ray)
            k = tuple(ynew)
            if k not in ys:
                if len(order) >= budget:
                    complete = False
                    continue
                ys[k] = len(order)
                order.append(list(ynew))
                queue.append(ys[k])
            edges.add(tuple(sorted((i, ys[k]))))

    verts = [GramMatrix(space.gram_rows(y), check=False) for y in order]
    k = len(order)
    bary_y = [sum(y[j] for y in order) / k for j in range(space.dim)]
    bary = GramMatrix(space.gram_rows(bary_y), check=False)
    s = kissing_half(bary)
    r = perfection_rank(bary)
    s_prime = None
    if geometry is not None:
        s_prime = kissing_half(sublattice_gram(bary, geometry.ebar))
    dim = rank([[a - b for a, b in zip(y, order[0])] for y in order[1:]]) \
        if k > 1 else 0
    return FaceDescription(space, order, verts, sorted(edges), bary, dim,
                           s, r, s_prime, complete)


@dataclass
class ClassInvariants:
    """Invariants of the minimal class read off a relative interior point."""

    interior: GramMatrix
    s: int
    r: int
    s_prime: int | None

    @property
    def face_dim(self) -> int:
        n = self.interior.n
        return n * (n + 1) // 2 - self.r


def class_invariants(outcome, geometry=None) -> ClassInvariants:
    """Class invariants without enumerating the whole face.

    From a vertex, the sum D of the extreme-ray generators points into the
    relative interior; the interior minimal vectors are exactly the tight
    vectors annihilated by every ray, so a small exact step along D lands
    on an interior matrix once its minimal-vector set matches that stable
    set.  This replaces the full vertex traversal for classification runs.
    """
    if not outcome.feasible:
        raise ValueError("class invariants need a feasible outcome")
    space = outcome.space
    geometry = geometry or outcome.geometry
    y = descend_to_vertex(space, space.coords_of(outcome.witness.mat))
    rays = extreme_rays(space, y)
    base = space.gram_rows(y)
    if not rays:
        interior = GramMatrix(base, check=False)
    else:
        direction = [sum(r[j] for r in rays) for j in range(space.dim)]
        dir_rows = _ray_rows(space, direction)
        short = shortest_vectors(GramMatrix(base, check=False), QONE)
        stable = sorted(x for x, val in short
                        if val == QONE and _form_value(dir_rows, x) == 0)
        t = QONE
        for _ in range(256):
            rows = [[a + t * b for a, b in zip(ra, rb)]
                    for ra, rb in zip(base, dir_rows)]
            if ldlt(rows, want_witness=False).status == "posdef":
                cur = shortest_vectors(GramMatrix(rows, check=False), QONE,
                                       stop_below=QONE)
                if cur and min(v for _, v in cur) == QONE and \
                        sorted(x for x, _ in cur) == stable:
                    interior = GramMatrix(rows, check=False)
                    break
            t = t / 2
        else:
            raise RayEscape("no interior step found along the ray sum")
    s = interior.s()
    r = perfection_rank(interior)
    s_prime = None
    if geometry is not None:
        s_prime = kissing_half(sublattice_gram(interior, geometry.ebar))
    return ClassInvariants(interior, s, r, s_prime)


def class_face_space(gram: GramMatrix, mats=None) -> FaceSpace:
    """Affine hull of the face whose relative interior contains the given
    minimum-1 Gram matrix: the slice where all its minimal vectors stay at
    norm one."""
    if gram.minimum() != 1:
        raise ValueError("expected a Gram matrix of minimum 1")
    space = face_space(gram.half_set(), gram.n, mats)
    if space is None:
        raise ValueError("inconsistent minimal-vector constraints")
    return space


def face_invariants(outcome, budget=512):
    """FaceDescription for a feasibility outcome (must be feasible)."""
    if not outcome.feasible:
        raise ValueError("face traversal needs a feasible outcome")
    return traverse_face(outcome.space, outcome.witness, outcome.geometry,
                         budget=budget)
