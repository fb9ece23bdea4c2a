# Copyright 2026 The hyperprice Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent numpy evaluation of the small hand-set layer cases.

Run with `python3 layer_oracles.py`; the printed values are frozen into
tests/test_convolution.cpp and tests/test_preference.cpp.
"""
import numpy as np

np.set_printoptions(precision=17)


def softmax(x):
    z = np.exp(x - np.max(x))
    return z / z.sum()


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def show(name, value):
    flat = np.atleast_1d(np.asarray(value, dtype=float)).ravel()
    print(name, " ".join(repr(float(v)) for v in flat))


# Co-occurrence mean over three neighbors.
show("cooc", np.mean([[1.0, 2.0], [3.0, -1.0], [0.5, 0.5]], axis=0))

# Intra-type attention with two neighbors.
v = np.array([1.0, 0.5])
W = np.array([[0.2, -0.1], [0.3, 0.4]])
nbrs = np.array([[1.0, -1.0], [0.5, 2.0]])
alpha = softmax(np.array([v @ W @ k for k in nbrs]))
show("intra_alpha", alpha)
show("intra_e", alpha @ nbrs)

# Inter-type gated fusion.
v = np.array([0.5, -0.2])
e = [np.array([0.1, 0.3]), np.array([-0.4, 0.2]), np.array([0.3, 0.3])]
Wa = np.array([[0.1, -0.2, 0.3, 0.4, -0.5, 0.6, 0.2, -0.1],
               [0.05, 0.15, -0.25, 0.35, 0.45, -0.55, 0.1, 0.2]])
Wj = [np.array([[0.3, 0.1], [-0.2, 0.4]]),
      np.array([[-0.1, 0.2], [0.5, -0.3]]),
      np.array([[0.25, -0.35], [0.15, 0.05]])]
base = Wa @ np.concatenate([v] + e)
h = v.copy()
for ej, Wg in zip(e, Wj):
    h = h + np.tanh(base + Wg @ ej) * ej
show("inter_h", h)

# Position enhancement.
x = np.array([0.3, -0.7])
pos = np.array([0.1, 0.2])
Wp = np.array([[0.5, -0.4, 0.3, 0.2], [-0.1, 0.6, 0.7, -0.2]])
bp = np.array([0.05, -0.1])
show("enhance", np.tanh(Wp @ np.concatenate([x, pos]) + bp))

# Single-head self-attention read at the last of two positions.
E = np.array([[0.5, -0.3], [0.2, 0.8]])
WQ = np.array([[0.4, 0.1], [-0.3, 0.6]])
WK = np.array([[0.2, -0.5], [0.7, 0.3]])
WV = np.array([[1.0, 0.2], [-0.4, 0.9]])
q = WQ @ E[-1]
scores = np.array([q @ (WK @ e) for e in E]) / np.sqrt(2.0)
a = softmax(scores)
show("price_alpha", a)
show("price_u", sum(ai * (WV @ e) for ai, e in zip(a, E)))

# Two heads of width one on d = 2.
outs = []
for head in range(2):
    rows = slice(head, head + 1)
    qh = (WQ[rows] @ E[-1])
    sc = np.array([qh @ (WK[rows] @ e) for e in E]) / np.sqrt(1.0)
    ah = softmax(sc)
    outs.append(sum(ai * (WV[rows] @ e) for ai, e in zip(ah, E)))
show("price_u_two_heads", np.concatenate(outs))

# Interest preference with unnormalized weights.
Vs = np.array([[0.2, -0.6], [0.7, 0.1]])
H = np.array([[1.0, 0.5], [-0.5, 2.0]])
A1 = np.array([[0.3, -0.2], [0.1, 0.4]])
A2 = np.array([[-0.5, 0.2], [0.6, 0.1]])
b = np.array([0.1, -0.2])
z = np.array([0.8, -0.3])
vbar = Vs.mean(axis=0)
beta = np.array([z @ sigmoid(A1 @ vi + A2 @ vbar + b) for vi in Vs])
show("interest_beta", beta)
show("interest_u", beta @ H)

# Bi-preference fusion.
up = np.array([0.4, -0.6])
ui = np.array([-0.2, 0.9])
W1pi = np.array([[0.3, 0.2], [-0.1, 0.5]])
W2pi = np.array([[0.4, -0.3], [0.2, 0.1]])
bpi = np.array([0.05, -0.05])
W1p = np.array([[0.6, -0.2], [0.1, 0.3]])
W2p = np.array([[-0.4, 0.5], [0.2, 0.2]])
W1I = np.array([[0.1, 0.7], [-0.3, 0.2]])
W2I = np.array([[0.3, 0.3], [-0.6, 0.4]])
m = np.tanh(W1pi @ up + W2pi @ ui + bpi)
rp = sigmoid(W1p @ up + W2p @ m)
ri = sigmoid(W1I @ ui + W2I @ m)
show("fuse_up", rp * up + (1 - rp) * ui)
show("fuse_ui", ri * ui + (1 - ri) * up)

# Interest head over four items.
u = np.array([0.5, -1.0])
V = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [-1.0, 2.0]])
show("score_interest", softmax(V @ u))

# Price head over five levels.
u = np.array([0.3, 0.8])
P = np.array([[1.0, -1.0], [0.5, 0.0], [0.0, 0.5], [-0.5, 1.0], [1.0, 1.0]])
show("score_price", softmax(P @ u))

# Joint loss on hand-set distributions.
yi = np.array([0.1, 0.2, 0.3, 0.4])
yp = np.array([0.05, 0.15, 0.6, 0.1, 0.1])
show("joint_loss", -np.log(yi[2]) - np.log(yp[2]))

# Joint scoring over four items with levels [0, 2, 2, 1] (0-based).
up = np.array([0.3, -0.4])
ui = np.array([0.5, 0.2])
Lv = np.array([[0.2, 0.1], [-0.3, 0.4], [0.6, -0.5]])
levels = [0, 2, 2, 1]
V = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [-1.0, 2.0]])
show("score_items", softmax(np.array([up @ Lv[l] + ui @ V[i] for i, l in enumerate(levels)])))

# Logistic CDF with unit scale.
show("logistic_cdf", 1.0 / (1.0 + np.exp(-1.0)))

# One Adam step from zero state.
g, lr, b1, b2, eps = 0.5, 1e-3, 0.9, 0.999, 1e-8
mhat = (1 - b1) * g / (1 - b1)
vhat = (1 - b2) * g * g / (1 - b2)
show("adam_delta", -lr * mhat / (np.sqrt(vhat) + eps))
