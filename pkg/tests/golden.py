"""The three genus-4 worked examples: curves, canonical models, and the
listed generators of I_2 and I_3, with symbolic coefficients a and b."""

from fractions import Fraction

from unicusp.exactalg import Poly

t = Poly.t()
NAMES = ["w", "x", "y", "z"]


def curve(case, a, b):
    if case == "ii":
        return [Poly([1, a, b]), t**3, t**7, t**8]
    if case == "iii":
        return [Poly([1, a, b]), t**4, t**5, t**7, t**8]
    return [Poly([1, a]), t**4, t**6, t**7, t**9, t**10]


def model(case, a, b):
    if case == "ii":
        return [Poly([1, a, b]), Poly([0, 1, a]), t**3, t**4]
    if case == "iii":
        return [Poly([1, a, b]), t**3, t**4, t**5]
    return [Poly([1, a]), t**2, t**3, t**4]


GENERATORS = {
    "ii": (
        ["by^2 + xy - zw"],
        [
            "x^3 - axyw + 2bxzw + b^3y^3 - aby^2w - b^2yzw - yw^2",
            "x^2y - xzw - b^2y^3 + byzw",
            "x^2z - b^2y^2z - y^2w - ayzw + bz^2w",
            "xy^2 + by^3 - yzw",
            "xyz + by^2z - z^2w",
            "xz^2 - y^3 - ay^2z",
            "-xyw - by^2w + zw^2",
        ],
    ),
    "iii": (
        ["y^2 - xz"],
        [
            "x^2z - xy^2",
            "xzw - y^2w",
            "-xyz + y^3",
            "y^2z - xz^2",
            "yzw - x^3 - ax^2y - bxy^2",
            "z^2w - x^2y - axy^2 - bxyz",
        ],
    ),
    "iv": (
        ["y^2 - xz", "zw - x^2 - axy"],
        [
            "xy^2 - x^2z",
            "xzw - x^3 - ax^2y",
            "y^3 - xyz",
            "y^2z - xz^2",
            "y^2w - x^3 - ax^2y",
            "yzw - x^2y - ax^2z",
            "z^2w - x^2z - axyz",
            "zw^2 - x^2w - axyw",
        ],
    ),
}

DIMENSIONS = {"ii": (1, 7), "iii": (1, 6), "iv": (2, 8)}
INVARIANTS = {"ii": {"eta": 2, "sigma": 2}, "iii": {"eta": 1, "sigma": 2, "g_prime": 2},
              "iv": {"eta": 2, "sigma": 2, "g_prime": 1}}


def samples(rng, k=5):
    out = []
    for _ in range(k):
        a = b = 0
        while a == 0 or b == 0:
            a, b = rng.randint(-1000, 1000), rng.randint(-1000, 1000)
        out.append((Fraction(a), Fraction(b)))
    return out
