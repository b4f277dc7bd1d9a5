"""Primitive polynomials and initial direction numbers for the Sobol sequence.

Values are the published Joe-Kuo "new-joe-kuo-6.21201" table entries for
dimensions 2 through 16 (dimension 1 needs no table: every m_k is 1).  Each
row is (s, a, m) where s is the degree of the primitive polynomial over
GF(2), a encodes its interior coefficients, and m holds the s odd initial
direction integers.
"""

MAX_DIM = 16

JOE_KUO = (
    (1, 0, (1,)),                    # dimension 2
    (2, 1, (1, 3)),                  # dimension 3
    (3, 1, (1, 3, 1)),               # dimension 4
    (3, 2, (1, 1, 1)),               # dimension 5
    (4, 1, (1, 1, 3, 3)),            # dimension 6
    (4, 4, (1, 3, 5, 13)),           # dimension 7
    (5, 2, (1, 1, 5, 5, 17)),        # dimension 8
    (5, 4, (1, 1, 5, 5, 5)),         # dimension 9
    (5, 7, (1, 1, 7, 11, 19)),       # dimension 10
    (5, 11, (1, 1, 5, 1, 1)),        # dimension 11
    (5, 13, (1, 1, 1, 3, 11)),       # dimension 12
    (5, 14, (1, 3, 5, 5, 31)),       # dimension 13
    (6, 1, (1, 3, 3, 9, 7, 49)),     # dimension 14
    (6, 13, (1, 1, 1, 15, 21, 21)),  # dimension 15
    (6, 16, (1, 3, 1, 13, 27, 49)),  # dimension 16
)
