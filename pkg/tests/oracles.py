"""Independent reference computations used across the test suite."""
import numpy as np


def transfer_matrix(net, gains):
    """``T = (I - M)^-1`` with ``M[u, v] = beta_u h_{u,v}`` (``beta_S = 1``).

    ``T[j, k]`` is the path sum from the input of ``j`` to the input of ``k``,
    so ``T[j, D]`` is the global coefficient of ``j`` towards the destination.
    """
    dag = net.to_dag()
    nodes = list(dag.nodes)
    idx = {n: i for i, n in enumerate(nodes)}
    M = np.zeros((len(nodes), len(nodes)))
    for (u, v), h in dag.gains.items():
        b = 1.0 if u == dag.source else gains[u]
        M[idx[u], idx[v]] = b * h
    T = np.linalg.inv(np.eye(len(nodes)) - M)
    return T, idx


def snr_matrix(net, gains):
    dag = net.to_dag()
    T, idx = transfer_matrix(net, gains)
    d = idx[dag.destination]
    signal = T[idx[dag.source], d] ** 2 * dag.source_power
    noise = sum(T[idx[j], d] ** 2 for j in dag.relays) + 1.0
    return signal / noise


def exact_tx_power(net, gains):
    """``E[x_k^2]`` for every relay by variance propagation."""
    dag = net.to_dag()
    T, idx = transfer_matrix(net, gains)
    out = {}
    for k in dag.relays:
        i = idx[k]
        y2 = T[idx[dag.source], i] ** 2 * dag.source_power + 1.0
        y2 += sum(T[idx[j], i] ** 2 for j in dag.relays if j != k)
        out[k] = gains[k] ** 2 * y2
    return out


def layered_snr(net, betas):
    """Matrix-product SNR of a layered network: ``h_last B ... H_1 B_1 h_0``."""
    L = net.L
    v = net.matrix(0)[:, 0] * np.sqrt(net.source_power)
    noise_maps = []
    for l in range(1, L):
        B = np.diag([betas[k] for k in net.layer_nodes(l)])
        v = net.matrix(l) @ (B @ v)
        noise_maps = [net.matrix(l) @ B @ N for N in noise_maps] + [net.matrix(l) @ B]
    signal = float(v[0] ** 2)
    noise = 1.0 + sum(float(np.sum(N ** 2)) for N in noise_maps)
    return signal / noise
