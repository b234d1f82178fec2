"""Finite direct sums of full complex matrix blocks and their elements.

An algebra is described by its block dimensions (n_1, ..., n_k); blocks of
size 1 form the commutative part.  The canonical linear basis consists of
the matrix units E^{(i)}_{jk} ordered block-major, row-major inside each
block, so the coefficient space has dimension sum(n_i^2).
"""

from __future__ import annotations

import numpy as np

from .errors import HomomorphismError, ShapeError


class FiniteAlgebra:
    def __init__(self, block_dims):
        block_dims = tuple(int(n) for n in block_dims)
        if len(block_dims) < 1 or any(n < 1 for n in block_dims):
            raise ValueError(f"need at least one block, all sizes >= 1, got {block_dims}")
        self.block_dims = block_dims
        self.dim = int(sum(n * n for n in block_dims))
        offs = np.cumsum([0] + [n * n for n in block_dims])
        self._offsets = tuple(int(o) for o in offs)
        self._herm_basis = None

    @property
    def num_blocks(self):
        return len(self.block_dims)

    @property
    def is_commutative(self):
        return all(n == 1 for n in self.block_dims)

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self.block_dims == other.block_dims

    def __hash__(self):
        return hash(self.block_dims)

    def __repr__(self):
        return f"FiniteAlgebra(block_dims={self.block_dims})"

    def basis_index(self, block, row, col):
        n = self.block_dims[block]
        if not (0 <= row < n and 0 <= col < n):
            raise IndexError(f"unit ({row},{col}) out of range for block of size {n}")
        return self._offsets[block] + row * n + col

    def basis_position(self, index):
        """Inverse of basis_index: flat index -> (block, row, col)."""
        for b, n in enumerate(self.block_dims):
            if index < self._offsets[b + 1]:
                local = index - self._offsets[b]
                return b, local // n, local % n
        raise IndexError(index)

    def unit_product(self, a, b):
        """Product of two matrix units: returns the flat index of the result
        or None when the product is zero (different blocks / mismatched
        inner indices)."""
        ba, ra, ca = self.basis_position(a)
        bb, rb, cb = self.basis_position(b)
        if ba != bb or ca != rb:
            return None
        return self.basis_index(ba, ra, cb)

    def unit_adjoint(self, a):
        b, r, c = self.basis_position(a)
        return self.basis_index(b, c, r)

    def zero(self):
        return AlgebraElement(self, [np.zeros((n, n), dtype=np.complex128) for n in self.block_dims])

    def identity(self):
        return AlgebraElement(self, [np.eye(n, dtype=np.complex128) for n in self.block_dims])

    def basis_element(self, index):
        e = self.zero()
        b, r, c = self.basis_position(index)
        e.blocks[b][r, c] = 1.0
        return e

    def element_from_coeffs(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.complex128).ravel()
        if coeffs.size != self.dim:
            raise ShapeError(f"expected {self.dim} coefficients, got {coeffs.size}")
        blocks = []
        for b, n in enumerate(self.block_dims):
            seg = coeffs[self._offsets[b]: self._offsets[b + 1]]
            blocks.append(seg.reshape(n, n).copy())
        return AlgebraElement(self, blocks)

    def element_from_function(self, values):
        """Commutative convenience: one scalar per size-1 block."""
        if not self.is_commutative:
            raise ValueError("element_from_function needs a commutative algebra")
        return self.element_from_coeffs(np.asarray(values, dtype=np.complex128))

    def hermitian_basis(self):
        """Real-coordinate basis of the self-adjoint part.

        Per block: diagonal units, then for each j<k the symmetric pair
        E_jk + E_kj and the antisymmetric pair i(E_jk - E_kj).  Real linear
        combinations of these exhaust the self-adjoint elements; the count
        equals the algebra dimension.
        """
        if self._herm_basis is None:
            out = []
            for b, n in enumerate(self.block_dims):
                for j in range(n):
                    e = self.zero()
                    e.blocks[b][j, j] = 1.0
                    out.append(e)
                for j in range(n):
                    for k in range(j + 1, n):
                        e = self.zero()
                        e.blocks[b][j, k] = 1.0
                        e.blocks[b][k, j] = 1.0
                        out.append(e)
                        e = self.zero()
                        e.blocks[b][j, k] = 1.0j
                        e.blocks[b][k, j] = -1.0j
                        out.append(e)
            self._herm_basis = tuple(out)
        return list(self._herm_basis)

    def element_from_real_coords(self, y):
        """Element sum_j y_j h_j over the hermitian basis (y real)."""
        y = np.asarray(y, dtype=np.float64).ravel()
        basis = self.hermitian_basis()
        if y.size != len(basis):
            raise ShapeError(f"expected {len(basis)} real coordinates, got {y.size}")
        out = self.zero()
        for yj, h in zip(y, basis):
            if yj != 0.0:
                for blk_out, blk_h in zip(out.blocks, h.blocks):
                    blk_out += yj * blk_h
        return out


class AlgebraElement:
    def __init__(self, algebra, blocks):
        if len(blocks) != algebra.num_blocks:
            raise ShapeError("block count mismatch")
        self.algebra = algebra
        self.blocks = []
        for n, blk in zip(algebra.block_dims, blocks):
            blk = np.asarray(blk, dtype=np.complex128)
            if blk.shape != (n, n):
                raise ShapeError(f"block shape {blk.shape} != ({n},{n})")
            self.blocks.append(blk)

    def coeffs(self):
        return np.concatenate([blk.ravel() for blk in self.blocks])

    def adjoint(self):
        return AlgebraElement(self.algebra, [np.conj(b).T for b in self.blocks])

    def is_selfadjoint(self, tol=1e-10):
        return all(np.max(np.abs(b - np.conj(b).T), initial=0.0) <= tol for b in self.blocks)

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __mul__(self, scalar):
        return AlgebraElement(self.algebra, [scalar * b for b in self.blocks])

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def _check(self, other):
        if self.algebra != other.algebra:
            raise ShapeError("elements live on different algebras")

    def norm(self):
        return float(max(np.linalg.norm(b, 2) for b in self.blocks))

    def __repr__(self):
        return f"AlgebraElement({self.algebra.block_dims}, coeffs={np.round(self.coeffs(), 6)})"


class BlockHomomorphism:
    """Surjectivity-checkable unital *-homomorphism between block algebras.

    Supplied declaratively as a routing table: each target block receives
    one source block of the same dimension, optionally conjugated by a
    unitary.  phi(x)_t = U_t x_{s(t)} U_t*.  Expanding the table to a
    linear map (and verifying unitarity of the conjugations) prevents
    silently non-homomorphic inputs.
    """

    def __init__(self, source, target, routing, unitary_tol=1e-10):
        self.source = source
        self.target = target
        entries = {}
        for item in routing:
            if isinstance(item, dict):
                t, s, u = item["target_block"], item["source_block"], item.get("conjugation")
            else:
                t, s, u = (item + (None,))[:3] if len(item) == 2 else item
            t, s = int(t), int(s)
            if t in entries:
                raise HomomorphismError(f"target block {t} routed twice", "bad_routing")
            if not (0 <= t < target.num_blocks and 0 <= s < source.num_blocks):
                raise HomomorphismError(f"routing ({t} <- {s}) out of range", "bad_routing")
            nt, ns = target.block_dims[t], source.block_dims[s]
            if nt != ns:
                raise HomomorphismError(
                    f"routing {t} <- {s}: block sizes {nt} != {ns}", "bad_routing")
            if u is not None:
                u = np.asarray(u, dtype=np.complex128)
                if u.shape != (nt, nt):
                    raise HomomorphismError("conjugation has wrong shape", "bad_routing")
                defect = np.linalg.norm(u @ np.conj(u).T - np.eye(nt), 2)
                if defect > unitary_tol:
                    raise HomomorphismError(
                        f"conjugation for target {t} not unitary (defect {defect:.2e})", "not_star")
            entries[t] = (s, u)
        missing = [t for t in range(target.num_blocks) if t not in entries]
        if missing:
            raise HomomorphismError(f"target blocks {missing} not routed", "bad_routing")
        self.routing = entries

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, algebra, [(b, b) for b in range(algebra.num_blocks)])

    @property
    def is_surjective(self):
        sources = [s for s, _ in self.routing.values()]
        return len(set(sources)) == len(sources)

    def require_surjective(self):
        if not self.is_surjective:
            raise HomomorphismError(
                "routing reuses a source block, map is not surjective", "not_surjective")

    def apply(self, element):
        if element.algebra != self.source:
            raise ShapeError("element not in the source algebra")
        blocks = []
        for t in range(self.target.num_blocks):
            s, u = self.routing[t]
            blk = element.blocks[s]
            if u is not None:
                blk = u @ blk @ np.conj(u).T
            blocks.append(blk.copy())
        return AlgebraElement(self.target, blocks)

    def linear_map(self):
        """Dense (dim target) x (dim source) matrix on coefficient vectors."""
        m = np.zeros((self.target.dim, self.source.dim), dtype=np.complex128)
        for idx in range(self.source.dim):
            m[:, idx] = self.apply(self.source.basis_element(idx)).coeffs()
        return m

    def to_json(self):
        routing = []
        for t in sorted(self.routing):
            s, u = self.routing[t]
            routing.append({
                "target_block": t,
                "source_block": s,
                "conjugation": None if u is None else u,
            })
        return {"routing": routing}

    def __repr__(self):
        r = {t: s for t, (s, _) in self.routing.items()}
        return f"BlockHomomorphism({self.source.block_dims} -> {self.target.block_dims}, {r})"
