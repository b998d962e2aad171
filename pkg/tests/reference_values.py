"""Published values of Verlinde(N,K,g) and Spin_Verl(N,K,sigma).

The source table lists Spin_Verl(6,6,[[1,0],[0,0]]) twice, as 23678 and as
23624.  Evaluating nearby structures gives 23678 for [[1,0],[0,0]] and
23624 for [[1,1],[0,0]], so the second entry is recorded as [[1,1],[0,0]].
"""

VERLINDE = {
    (2, 2, 1): 3,
    (2, 2, 2): 10,
    (2, 6, 1): 7,
    (2, 6, 2): 84,
    (4, 4, 1): 35,
    (4, 4, 2): 4680,
    (6, 6, 1): 462,
    (6, 6, 2): 30660988,
}

SPIN = [
    (2, 2, [[0, 0]], 1),
    (2, 2, [[1, 1]], 0),
    (2, 2, [[0, 0], [1, 1]], 0),
    (2, 2, [[1, 1], [1, 1]], 1),
    (2, 6, [[0, 0]], 2),
    (2, 6, [[1, 1]], 1),
    (2, 6, [[0, 0], [1, 1]], 4),
    (2, 6, [[0, 0], [0, 0]], 6),
    (4, 4, [[0, 0]], 3),
    (4, 4, [[1, 0]], 2),
    (4, 4, [[1, 1]], 2),
    (4, 4, [[2, 2]], 2),
    (4, 4, [[0, 0], [0, 0]], 24),
    (4, 4, [[1, 0], [0, 0]], 18),
    (4, 4, [[1, 0], [1, 0]], 18),
    (4, 4, [[2, 2], [0, 0]], 20),
    (6, 6, [[0, 0]], 14),
    (6, 6, [[1, 0]], 13),
    (6, 6, [[2, 0]], 13),
    (6, 6, [[1, 1]], 12),
    (6, 6, [[2, 2]], 13),
    (6, 6, [[3, 0]], 14),
    (6, 6, [[3, 3]], 12),
    (6, 6, [[0, 0], [0, 0]], 23718),
    (6, 6, [[1, 0], [0, 0]], 23678),
    (6, 6, [[1, 1], [0, 0]], 23624),
    (6, 6, [[2, 0], [0, 0]], 23678),
    (6, 6, [[2, 2], [0, 0]], 23678),
    (6, 6, [[3, 0], [0, 0]], 23718),
    (6, 6, [[3, 3], [0, 0]], 23648),
]
