"""
Operator word families in S_4: the Fibonacci family and words in U_l, U_u.

In the Schubert basis (X_1, X_3) of the degree-one part, with X_1 = x_1 and
X_3 = -x_4, the operators act by

    F   = [[1, 1], [1, 0]]
    U_l = [[1, 0], [1, 1]]
    U_u = [[-1, -1], [0, -1]]
"""

from sympy import fibonacci

from torsionlab.algebra.sym import from_letters, identity
from torsionlab.certificates.construct import OperatorData
from torsionlab.core.errors import InvalidInputError

from .operators import ulu_operators


S1 = from_letters([1], 4)
S3 = from_letters([3], 4)
S23 = from_letters([2, 3], 4)
S123 = from_letters([1, 2, 3], 4)

LETTER_MATRICES = {
    "L": ((1, 0), (1, 1)),
    "U": ((-1, -1), (0, -1)),
}

# seed polynomial and sign for each basis vector: X_1 = x_1, X_3 = -x_4
COLUMN_SEEDS = ((1, 0, 1), (0, 1, -1))
ROW_CLOSURES = (S1, S3)


def fibonacci_data(i: int) -> OperatorData:
    """
    Data for d_1(F^i(x_1)) = F_{i+1}.

    The seed x_1 is absorbed into the first d_1 and the closing d_1 into the
    last d_23, so a = i + 1, b = 2i and N = 3i + 5.
    """
    if i < 1:
        raise InvalidInputError(f"Fibonacci index must be positive, got {i}")
    items = [(S1, 2, 0), (S23, 0, 2)]
    for _ in range(i - 1):
        items += [(S1, 1, 0), (S23, 0, 2)]
    items[-1] = (S123, 0, 2)
    return OperatorData(4, tuple(items))


def fibonacci_value(i: int) -> int:
    return int(fibonacci(i + 1))


def _mat_mul(X, Y):
    return tuple(
        tuple(sum(X[r][k] * Y[k][c] for k in range(2)) for c in range(2)) for r in range(2)
    )


def parse_ulu_word(word):
    letters = [ch for ch in (word if not isinstance(word, str) else word.strip().upper())]
    for ch in letters:
        if ch not in LETTER_MATRICES:
            raise InvalidInputError(f"Letters must be L or U, got {ch!r}")
    return letters


def ulu_matrix(word):
    """The ordered product of the letter matrices."""
    product = ((1, 0), (0, 1))
    for ch in parse_ulu_word(word):
        product = _mat_mul(product, LETTER_MATRICES[ch])
    return product


def ulu_word_data(word, row: int = 0, column: int = 0) -> OperatorData:
    """
    Data whose value is sign * P[row][column], P = ulu_matrix(word).

    The word w_1 ... w_l is the operator U(w_1) o ... o U(w_l), so the last
    letter acts first. The column picks the seed (x_1 for X_1, x_4 for
    -X_3) and the row the closing Demazure operator (d_1 for X_1, d_3 for
    X_3). The sign is -1 exactly when the column is X_3. N = 3l + 5.
    """
    letters = parse_ulu_word(word)
    if not letters:
        raise InvalidInputError("A U_l/U_u word must be nonempty")
    if row not in (0, 1) or column not in (0, 1):
        raise InvalidInputError(f"Entry ({row}, {column}) is outside a 2x2 matrix")
    ops = ulu_operators()
    p, q, _ = COLUMN_SEEDS[column]
    items = [(identity(4), p, q)]
    for ch in reversed(letters):
        items += [tuple(s) for s in ops.by_name(ch).steps]
    items.append((ROW_CLOSURES[row], 0, 0))
    return OperatorData(4, tuple(items))


def ulu_entry_sign(column: int) -> int:
    return COLUMN_SEEDS[column][2]
