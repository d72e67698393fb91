"""Scalar and dense matrix kernels.

Two kernels are supported:

* ``exact`` -- entries are :class:`ExactScalar`, elements of Q(i, sqrt 2) with
  power-of-two denominators.  Every gate in the canonical Fredkin construction
  lives here, so identities can be checked by structural equality.
* ``float`` -- entries are complex128 values held in a read-only numpy array.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence, Union

import numpy as np

EXACT = "exact"
FLOAT = "float"
KERNELS = (EXACT, FLOAT)
SUPPORTED_DIMS = (2, 4, 8)
DEFAULT_TOL = 1e-12

SQRT2 = math.sqrt(2.0)


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


class KernelError(ValueError):
    """Operands come from different kernels, or a value cannot live in the requested one."""


class ExactScalar:
    """The number ``(a + b*i + c*sqrt2 + d*i*sqrt2) / 2**k``.

    Instances are immutable and always canonical: when ``k > 0`` at least one
    of ``a, b, c, d`` is odd.  Equality is therefore structural.
    """

    __slots__ = ("a", "b", "c", "d", "k")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0, k: int = 0):
        for v in (a, b, c, d, k):
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise TypeError(f"ExactScalar components must be integers, got {v!r}")
        a, b, c, d, k = int(a), int(b), int(c), int(d), int(k)
        if k < 0:
            raise ValueError("denominator exponent k must be non-negative")
        m = a | b | c | d
        if m == 0:
            k = 0
        elif k:
            shift = min(k, (m & -m).bit_length() - 1)
            if shift:
                a >>= shift
                b >>= shift
                c >>= shift
                d >>= shift
                k -= shift
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def coerce(cls, value: "ExactScalar | int") -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return cls(int(value))
        raise KernelError(f"{value!r} is not an exact scalar")

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.k)

    # ring operations -----------------------------------------------------

    def __add__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except KernelError:
            return NotImplemented
        if self.k >= o.k:
            s = self.k - o.k
            return ExactScalar(self.a + (o.a << s), self.b + (o.b << s),
                               self.c + (o.c << s), self.d + (o.d << s), self.k)
        s = o.k - self.k
        return ExactScalar((self.a << s) + o.a, (self.b << s) + o.b,
                           (self.c << s) + o.c, (self.d << s) + o.d, o.k)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except KernelError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except KernelError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = ExactScalar.coerce(other)
        except KernelError:
            return NotImplemented
        # x = p + q*sqrt2 with Gaussian integers p = a + bi, q = c + di
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        pr = a1 * a2 - b1 * b2 + 2 * (c1 * c2 - d1 * d2)
        pi = a1 * b2 + b1 * a2 + 2 * (c1 * d2 + d1 * c2)
        qr = a1 * c2 - b1 * d2 + c1 * a2 - d1 * b2
        qi = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
        return ExactScalar(pr, pi, qr, qi, self.k + o.k)

    __rmul__ = __mul__

    def conj(self) -> "ExactScalar":
        return ExactScalar(self.a, -self.b, self.c, -self.d, self.k)

    def abs2(self) -> "ExactScalar":
        """``|x|**2`` as an exact (real) scalar."""
        return self * self.conj()

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    # comparison / conversion ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.as_tuple() == other.as_tuple()
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return self.as_tuple() == (int(other), 0, 0, 0, 0)
        return NotImplemented

    def __hash__(self):
        return hash(("ExactScalar",) + self.as_tuple())

    def __complex__(self):
        re = math.ldexp(float(self.a) + float(self.c) * SQRT2, -self.k)
        im = math.ldexp(float(self.b) + float(self.d) * SQRT2, -self.k)
        return complex(re, im)

    def __repr__(self):
        return f"ExactScalar({self.a}, {self.b}, {self.c}, {self.d}, k={self.k})"

    def __str__(self):
        terms = []
        for coeff, unit in ((self.a, ""), (self.b, "i"), (self.c, "r2"), (self.d, "i*r2")):
            if coeff:
                if unit:
                    body = unit if abs(coeff) == 1 else f"{abs(coeff)}*{unit}"
                else:
                    body = str(abs(coeff))
                terms.append(("-" if coeff < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        if self.k:
            out = f"({out})/{1 << self.k}" if len(terms) > 1 else f"{out}/{1 << self.k}"
        return out


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I_UNIT = ExactScalar(0, 1)
INV_SQRT2 = ExactScalar(0, 0, 1, 0, 1)

Scalar = Union[ExactScalar, complex]


def _is_exact_value(v) -> bool:
    return isinstance(v, ExactScalar) or (isinstance(v, (int, np.integer)) and not isinstance(v, bool))


class UMatrix:
    """Dense square matrix of dimension 2, 4 or 8 tagged with its kernel.

    Values are immutable.  ``rows`` for the exact kernel is a tuple of tuples
    of :class:`ExactScalar`; for the float kernel it is a read-only complex
    numpy array.
    """

    __slots__ = ("dim", "kernel", "_rows")

    def __init__(self, rows, kernel: str | None = None):
        if kernel is None:
            kernel = EXACT if _all_exact(rows) else FLOAT
        if kernel not in KERNELS:
            raise KernelError(f"unknown kernel {kernel!r}")
        if kernel == EXACT:
            data = tuple(tuple(ExactScalar.coerce(v) for v in row) for row in rows)
            n = len(data)
            if any(len(r) != n for r in data):
                raise DimensionError("matrix must be square")
        else:
            data = np.array(rows, dtype=np.complex128)
            if data.ndim != 2 or data.shape[0] != data.shape[1]:
                raise DimensionError("matrix must be square")
            if not np.all(np.isfinite(data)):
                raise ValueError("float matrix entries must be finite")
            data.setflags(write=False)
            n = data.shape[0]
        if n not in SUPPORTED_DIMS:
            raise DimensionError(f"unsupported dimension {n}; expected one of {SUPPORTED_DIMS}")
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "_rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("UMatrix is immutable")

    # constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, dim: int, kernel: str = EXACT) -> "UMatrix":
        if kernel == EXACT:
            return cls([[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)], EXACT)
        return cls(np.eye(dim, dtype=np.complex128), FLOAT)

    @classmethod
    def zeros(cls, dim: int, kernel: str = EXACT) -> "UMatrix":
        if kernel == EXACT:
            return cls([[ZERO] * dim for _ in range(dim)], EXACT)
        return cls(np.zeros((dim, dim), dtype=np.complex128), FLOAT)

    @classmethod
    def diag(cls, values: Sequence, kernel: str | None = None) -> "UMatrix":
        n = len(values)
        if kernel is None:
            kernel = EXACT if all(_is_exact_value(v) for v in values) else FLOAT
        zero = ZERO if kernel == EXACT else 0j
        return cls([[values[i] if i == j else zero for j in range(n)] for i in range(n)], kernel)

    # accessors ------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.kernel == EXACT

    def __getitem__(self, ij):
        i, j = ij
        if self.kernel == EXACT:
            return self._rows[i][j]
        return complex(self._rows[i, j])

    @property
    def rows(self):
        return self._rows

    def to_numpy(self) -> np.ndarray:
        """Writable complex128 copy of the entries."""
        if self.kernel == FLOAT:
            return np.array(self._rows)
        return np.array([[complex(v) for v in row] for row in self._rows], dtype=np.complex128)

    def to_float(self) -> "UMatrix":
        if self.kernel == FLOAT:
            return self
        return UMatrix(self.to_numpy(), FLOAT)

    # algebra --------------------------------------------------------------

    def _check_compatible(self, other: "UMatrix"):
        if not isinstance(other, UMatrix):
            raise TypeError(f"expected UMatrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.kernel != self.kernel:
            raise KernelError(f"kernel mismatch: {self.kernel} vs {other.kernel}")

    def __matmul__(self, other: "UMatrix") -> "UMatrix":
        return matrix_product(self, other)

    def __add__(self, other: "UMatrix") -> "UMatrix":
        self._check_compatible(other)
        if self.kernel == FLOAT:
            return UMatrix(self._rows + other._rows, FLOAT)
        return UMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self._rows, other._rows)], EXACT)

    def __neg__(self) -> "UMatrix":
        return self.scale(-1)

    def __sub__(self, other: "UMatrix") -> "UMatrix":
        return self + (-other)

    def scale(self, s) -> "UMatrix":
        if self.kernel == EXACT:
            s = ExactScalar.coerce(s)
            return UMatrix([[s * v for v in row] for row in self._rows], EXACT)
        return UMatrix(complex(s) * self._rows, FLOAT)

    def kron(self, other: "UMatrix") -> "UMatrix":
        return tensor_product(self, other)

    def adjoint(self) -> "UMatrix":
        return adjoint(self)

    def det(self):
        return determinant(self)

    def trace(self):
        if self.kernel == FLOAT:
            return complex(np.trace(self._rows))
        total = ZERO
        for i in range(self.dim):
            total = total + self._rows[i][i]
        return total

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        return is_unitary(self, tol)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, UMatrix):
            return NotImplemented
        if self.dim != other.dim or self.kernel != other.kernel:
            return False
        if self.kernel == EXACT:
            return self._rows == other._rows
        return bool(np.array_equal(self._rows, other._rows))

    def __hash__(self):
        if self.kernel == EXACT:
            return hash((self.dim, self._rows))
        return hash((self.dim, self._rows.tobytes()))

    def max_abs_diff(self, other: "UMatrix") -> float:
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return float(np.max(np.abs(self.to_numpy() - other.to_numpy())))

    def allclose(self, other: "UMatrix", tol: float = DEFAULT_TOL) -> bool:
        return self.max_abs_diff(other) <= tol

    def __repr__(self):
        return f"UMatrix(dim={self.dim}, kernel={self.kernel!r})"

    def pretty(self) -> str:
        if self.kernel == EXACT:
            cells = [[str(v) for v in row] for row in self._rows]
        else:
            cells = [[_fmt_complex(complex(v)) for v in row] for row in self._rows]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        if self.kernel == EXACT:
            rows = [[list(v.as_tuple()) for v in row] for row in self._rows]
        else:
            rows = [[[float(v.real), float(v.imag)] for v in row] for row in self._rows]
        return {"dim": self.dim, "kernel": self.kernel, "rows": rows}

    @classmethod
    def from_json(cls, obj: dict) -> "UMatrix":
        try:
            kernel = obj["kernel"]
            dim = int(obj["dim"])
            raw = obj["rows"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix JSON: {exc}") from None
        if kernel == EXACT:
            rows = [[ExactScalar(*entry) for entry in row] for row in raw]
        elif kernel == FLOAT:
            rows = [[complex(float(re), float(im)) for re, im in row] for row in raw]
        else:
            raise KernelError(f"unknown kernel {kernel!r}")
        m = cls(rows, kernel)
        if m.dim != dim:
            raise DimensionError(f"declared dim {dim} does not match {m.dim} rows")
        return m


def _fmt_complex(z: complex) -> str:
    re = 0.0 if abs(z.real) < 5e-13 else z.real
    im = 0.0 if abs(z.imag) < 5e-13 else z.imag
    if im == 0:
        return f"{re:.6g}"
    if re == 0:
        return f"{im:.6g}i"
    return f"{re:.6g}{im:+.6g}i"


def _all_exact(rows) -> bool:
    if isinstance(rows, np.ndarray):
        return rows.dtype == object and all(_is_exact_value(v) for v in rows.flat)
    return all(_is_exact_value(v) for row in rows for v in row)


# module-level operations ------------------------------------------------------


def matrix_product(x: UMatrix, y: UMatrix) -> UMatrix:
    """Ordinary product ``x @ y``; the exact kernel never rounds."""
    x._check_compatible(y)
    if x.kernel == FLOAT:
        return UMatrix(x._rows @ y._rows, FLOAT)
    n = x.dim
    ycols = list(zip(*y._rows))
    out = []
    for row in x._rows:
        nz = [(k, v) for k, v in enumerate(row) if not v.is_zero()]
        new_row = []
        for col in ycols:
            acc = ZERO
            for k, v in nz:
                w = col[k]
                if not w.is_zero():
                    acc = acc + v * w
            new_row.append(acc)
        out.append(new_row)
    assert len(out) == n
    return UMatrix(out, EXACT)


def tensor_product(x: UMatrix, y: UMatrix) -> UMatrix:
    """Kronecker product with ``x`` on the more significant wire."""
    if x.kernel != y.kernel:
        raise KernelError(f"kernel mismatch: {x.kernel} vs {y.kernel}")
    n = x.dim * y.dim
    if n not in SUPPORTED_DIMS:
        raise DimensionError(f"tensor product dimension {n} unsupported")
    if x.kernel == FLOAT:
        return UMatrix(np.kron(x._rows, y._rows), FLOAT)
    m = y.dim
    rows = [[x._rows[i // m][j // m] * y._rows[i % m][j % m] for j in range(n)] for i in range(n)]
    return UMatrix(rows, EXACT)


def adjoint(x: UMatrix) -> UMatrix:
    """Conjugate transpose."""
    if x.kernel == FLOAT:
        return UMatrix(x._rows.conj().T, FLOAT)
    return UMatrix([[x._rows[j][i].conj() for j in range(x.dim)] for i in range(x.dim)], EXACT)


def determinant(x: UMatrix):
    """Determinant; exact via memoised cofactor expansion, otherwise LAPACK."""
    if x.kernel == FLOAT:
        return complex(np.linalg.det(x._rows))
    rows = x._rows
    n = x.dim
    memo: dict[int, ExactScalar] = {}

    # minor(mask) = det of rows popcount(mask).. restricted to columns in mask
    def minor(mask: int) -> ExactScalar:
        if mask == 0:
            return ONE
        if mask in memo:
            return memo[mask]
        r = n - bin(mask).count("1")
        total = ZERO
        sign_pos = 0
        for j in range(n):
            bit = 1 << j
            if not mask & bit:
                continue
            v = rows[r][j]
            if not v.is_zero():
                term = v * minor(mask ^ bit)
                total = total - term if sign_pos % 2 else total + term
            sign_pos += 1
        memo[mask] = total
        return total

    return minor((1 << n) - 1)


def is_unitary(x: UMatrix, tol: float = DEFAULT_TOL) -> bool:
    """``max|M^dag M - I| <= tol``; the exact kernel compares structurally and ignores ``tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    prod = adjoint(x) @ x
    if x.kernel == EXACT:
        return prod == UMatrix.identity(x.dim, EXACT)
    return float(np.max(np.abs(prod._rows - np.eye(x.dim)))) <= tol


def phase_distance(w: UMatrix, t: UMatrix) -> float:
    """``1 - |tr(t^dag w)| / n``: zero exactly when ``w`` equals ``t`` up to a global phase."""
    if w.dim != t.dim:
        raise DimensionError(f"dimension mismatch: {w.dim} vs {t.dim}")
    overlap = np.vdot(t.to_numpy(), w.to_numpy())
    return max(0.0, 1.0 - abs(overlap) / w.dim)


def to_float(x: UMatrix) -> UMatrix:
    return x.to_float()


def as_kernel(x: UMatrix, kernel: str) -> UMatrix:
    """Convert to ``kernel``; float matrices cannot be promoted to exact."""
    if x.kernel == kernel:
        return x
    if kernel == FLOAT:
        return x.to_float()
    raise KernelError("float matrix cannot be represented in the exact kernel")


def exact_matrix(rows: Iterable[Iterable]) -> UMatrix:
    return UMatrix([list(r) for r in rows], EXACT)


def float_matrix(rows) -> UMatrix:
    return UMatrix(rows, FLOAT)
