#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# Independent reference computations for the constants frozen in the C++
# unit tests. Plain numpy with explicit matrix inverses, no shared code with
# the library. Run: python3 tests/oracles/golden_values.py
import math
import numpy as np

np.set_printoptions(precision=17)

s = math.sqrt(2.0) / 2.0
C_theta = np.array([[1.0, s], [s, 2.0]])
A = np.array([[1.0, 0.6, 0.4], [1.0, 0.6, 0.4]])  # q x K, column k is a_k
Cn = np.eye(3)

Cx = A.T @ C_theta @ A + Cn
Cxt = A.T @ C_theta
d0 = np.trace(C_theta) - np.trace(Cxt.T @ np.linalg.inv(Cx) @ Cxt)
print("ref d0                   = %.17g" % d0)

tau = np.array([4.0 * math.sqrt(A[:, k] @ C_theta @ A[:, k] + 1.0) for k in range(3)])
print("ref tau                  =", tau)
print("4*sqrt(4+sqrt2)          = %.17g" % (4 * math.sqrt(4 + math.sqrt(2))))

L = np.array([5.0, 5.0, 5.0])
Q = np.diag(tau**2 / (3.0 * (2.0**L - 1.0) ** 2))
W = np.linalg.inv(Cx + Q)
G = Cxt.T @ W
D1 = np.trace(C_theta) - np.trace(Cxt.T @ W @ Cxt)
print("G(L=5,5,5)               =\n", G)
print("D1(L=5,5,5)              = %.17g" % D1)

# D_1^upb at L=(5,5,5)
num = np.trace(Cxt.T @ Cxt) ** 2
den = np.trace(Cxt.T @ (Cx + Q) @ Cxt)
print("D1upb(L=5,5,5)           = %.17g" % (np.trace(C_theta) - num / den))

# D_2^upb at L=(5,5,5), P=(10,10,10), gamma = 1/2
gamma = 0.5
P = np.array([10.0, 10.0, 10.0])
u = 4 * tau**2 * L / 3 * np.exp(-gamma * P / L)
print("D2upb(L=5,P=10)          = %.17g" % np.trace(G @ np.diag(u) @ G.T))
lam_t = np.max(np.linalg.eigvalsh(Cxt @ Cxt.T)) / (np.min(np.linalg.eigvalsh(Cx)) + np.min(np.diag(Q))) ** 2
print("D2uupb(L=5,P=10)         = %.17g" % (lam_t * u.sum()))

# quantizer examples
tq, Lq = 3.5, 2
M = 2**Lq
D = 2 * tq / (M - 1)
levels = [(2 * i - 1 - M) * D / 2 for i in range(1, M + 1)]
print("levels tau=3.5 L=2       =", levels)
print("quant var tau=3.5 L=2    = %.17g (49/108=%.17g)" % (D * D / 12, 49 / 108))
# Bit-pattern reconstruction for bits [1,0]
b = [1, 0]
m = D * (0.5 - 2 ** (Lq - 1) + sum(bj * 2 ** (Lq - j) for j, bj in enumerate(b, 1)))
print("level from bits [1,0]    = %.17g" % m)

# u_k example
print("u(3.5,2,1,2)             = %.17g" % (4 * 12.25 * 2 / 3 * math.exp(-1)))
# Q(1)
print("Q(1)                     = %.17g" % (0.5 * math.erfc(1 / math.sqrt(2))))

# decoupled rates K=2, dt = (4,1), b=10
dt = np.array([4.0, 1.0])
gm = np.prod(dt) ** 0.5
print("decoupled rates          =", 10 / 2 + np.log2(np.sqrt(dt / gm)))

# exact level-error moment, L=2, uniform over levels, p_e=0.1
def exact_moment(Lb, tau_, pe):
    M_ = 2**Lb
    D_ = 2 * tau_ / (M_ - 1)
    lv = [(2 * i - 1 - M_) * D_ / 2 for i in range(1, M_ + 1)]
    tot = 0.0
    worst = 0.0
    for i in range(M_):
        e = 0.0
        for j in range(M_):
            flips = bin(i ^ j).count("1")
            e += pe**flips * (1 - pe) ** (Lb - flips) * (lv[j] - lv[i]) ** 2
        tot += e / M_
        worst = max(worst, e)
    return tot, worst

print("moment L=2 tau=1 pe=0.1  = %.17g (worst %.17g)" % exact_moment(2, 1.0, 0.1))

# One-bit level-error bound threshold: smallest c = gamma P with Q(sqrt(2c)) <= exp(-c)/3
lo, hi = 0.0, 5.0
for _ in range(200):
    mid = 0.5 * (lo + hi)
    if 0.5 * math.erfc(math.sqrt(2 * mid) / math.sqrt(2)) <= math.exp(-mid) / 3:
        hi = mid
    else:
        lo = mid
print("L=1 bound threshold c*   = %.12g" % hi)
