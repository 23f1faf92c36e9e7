import jax
import jax.numpy as jnp
from jaxtyping import ArrayLike

from singularPW.measure.atomic import AtomicMeasure, MuFunction
from singularPW.utils.errors import OrderError


def kaczmarz_iterate(m: AtomicMeasure, target_moments: ArrayLike, order: int) -> list[MuFunction]:
    r"""
    Classical (unit relaxation) Kaczmarz iteration against the exponentials in L^2(mu):
    $h_n = h_{n-1} + (c_n - \langle h_{n-1}, e_n \rangle) e_n / \|e_n\|^2$, $h_{-1} = 0$.

    With $c_n = \hat{f}(n)$ the iterates are the partial sums
    $\sum_{k \le n} \langle f, g_k \rangle e_k$, which makes this an independent oracle
    for the closed-form dual sequence.

    Args:
        m (AtomicMeasure): Measure.
        target_moments (ArrayLike): Right-hand sides c_0, c_1, ...
        order (int): Last iteration index.

    Returns:
        list[MuFunction]: Iterates h_0, ..., h_order.
    """
    targets = jnp.asarray(target_moments, dtype=jnp.complex128)
    if targets.shape[0] < order + 1:
        raise OrderError(f"{targets.shape[0]} target moments given, {order + 1} needed")
    exponentials = m.exponentials(order)

    def step(h, inputs):
        e_n, c_n = inputs
        projection = jnp.sum(m.weights * h * jnp.conj(e_n))
        norm_sq = jnp.sum(m.weights * jnp.abs(e_n) ** 2)
        h = h + (c_n - projection) / norm_sq * e_n
        return h, h

    _, iterates = jax.lax.scan(
        step,
        jnp.zeros(m.n_atoms, dtype=jnp.complex128),
        (exponentials, targets[: order + 1]),
    )
    return [MuFunction(h) for h in iterates]
