"""
Arithmetic in small finite fields
=================================

Elements of GF(q) are plain integers whose base-p digits are polynomial
coefficients, constant term first.
"""

from ttsched import galois

# GF(9) is built over GF(3) with the first monic irreducible quadratic
f9 = galois.field_new(9)
print("GF(9) reduction polynomial (constant first):", f9.reduction)

# x is the integer 3, x + 1 is 4
x, x1 = 3, 4
print("x * (x+1) =", galois.mul(x, x1, f9))
print("inverse of x:", galois.inv(x, f9))

# full tables are handy for eyeballing a small field
add, mul = galois.tables(4)
print("GF(4) multiplication table:")
for row in mul:
    print("  ", row)

# a polynomial of degree k over GF(q) evaluated at every element
f5 = galois.field_new(5)
coeffs = [1, 2, 3]   # 1 + 2x + 3x^2
print("values on GF(5):", [galois.eval_poly(coeffs, e, f5) for e in f5.elements()])
