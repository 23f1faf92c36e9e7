import cmath
import math

import jax
import jax.numpy as jnp
import pytest

from singularPW.measure.atomic import (
    AtomicMeasure,
    MuFunction,
    fourier_stieltjes,
    fourier_transform,
    inner_product,
    moment,
    norm,
)
from singularPW.measure.ifs import IFSMeasure, ifs_fourier_stieltjes, ifs_moment, ifs_refine
from singularPW.utils.errors import MeasureError, RefinementCapError
from singularPW.utils.random import random_atomic_measure, random_function


class TestAtomicMeasure:
    def test_dirac_moments(self):
        m = AtomicMeasure.dirac()
        assert jnp.allclose(moment(m, jnp.arange(-5, 6)), 1.0)

    def test_symmetric_pair_moment(self):
        m = AtomicMeasure.from_atoms([[-0.25, 0.5], [0.25, 0.5]])
        assert jnp.isclose(moment(m, 1), 0.0, atol=1e-15)

    def test_centred_grid_matches_direct_sum(self):
        positions = [-3 / 8, -1 / 8, 1 / 8, 3 / 8]
        m = AtomicMeasure(jnp.array(positions), jnp.full(4, 0.25))
        for n in range(-9, 10):
            direct = sum(0.25 * cmath.exp(-2j * math.pi * n * x) for x in positions)
            assert jnp.isclose(moment(m, n), direct, atol=1e-14)
        assert jnp.isclose(moment(m, 4), -1.0, atol=1e-14)

    def test_roots_of_unity_family(self):
        for n_atoms in (2, 3, 4, 8):
            m = AtomicMeasure.roots_of_unity(n_atoms)
            eps = (-1) ** (n_atoms - 1)
            n = jnp.arange(3 * n_atoms + 1)
            expected = jnp.where(n % n_atoms == 0, float(eps) ** (n // n_atoms), 0.0)
            assert jnp.allclose(moment(m, n), expected, atol=1e-14)

    def test_single_atom_off_axis(self):
        m = AtomicMeasure.from_atoms([[0.25, 1.0]])
        assert jnp.isclose(fourier_stieltjes(m, 1j), math.exp(math.pi / 2))

    def test_symmetric_pair_is_real_cosine(self):
        a = 0.2
        m = AtomicMeasure.from_atoms([[-a, 0.5], [a, 0.5]])
        z = jnp.linspace(-3.0, 3.0, 13)
        values = fourier_stieltjes(m, z)
        assert jnp.allclose(values.imag, 0.0, atol=1e-15)
        assert jnp.allclose(values.real, jnp.cos(2 * jnp.pi * a * z))

    def test_conjugate_symmetry_and_bounds(self):
        m = random_atomic_measure(jax.random.PRNGKey(0), 6)
        n = jnp.arange(1, 40)
        assert jnp.allclose(moment(m, -n), jnp.conj(moment(m, n)))
        assert jnp.all(jnp.abs(moment(m, n)) <= 1 + 1e-12)
        assert jnp.isclose(moment(m, 0), 1.0)

    def test_exponential_envelope(self):
        m = random_atomic_measure(jax.random.PRNGKey(1), 5)
        z = jax.random.normal(jax.random.PRNGKey(2), (50,)) * 3 + 1j * jax.random.normal(
            jax.random.PRNGKey(3), (50,)
        ) * 3
        radius = jnp.max(jnp.abs(m.positions))
        assert jnp.all(
            jnp.abs(fourier_stieltjes(m, z)) <= jnp.exp(2 * jnp.pi * radius * jnp.abs(z.imag)) * (1 + 1e-12)
        )

    def test_positions_wrap_to_torus(self):
        m = AtomicMeasure(jnp.array([0.75]), jnp.array([1.0]))
        assert jnp.isclose(m.positions[0], -0.25)

    def test_support_interval(self):
        m = AtomicMeasure.from_atoms([[-0.3, 0.5], [0.1, 0.5]])
        assert m.support_interval() == pytest.approx((-0.3, 0.1))

    def test_invalid_measures(self):
        with pytest.raises(MeasureError):
            AtomicMeasure(jnp.array([0.0, 0.1]), jnp.array([0.5, 0.4]))
        with pytest.raises(MeasureError):
            AtomicMeasure(jnp.array([0.5]), jnp.array([1.0]))
        with pytest.raises(MeasureError):
            AtomicMeasure(jnp.array([0.1, 1.1]), jnp.array([0.5, 0.5]))
        with pytest.raises(MeasureError):
            AtomicMeasure(jnp.array([0.0, 0.1]), jnp.array([1.5, -0.5]))
        with pytest.raises(MeasureError):
            AtomicMeasure(jnp.array([]), jnp.array([]))


class TestInnerProduct:
    def test_constant_one(self):
        m = random_atomic_measure(jax.random.PRNGKey(4), 7)
        one = MuFunction.constant(m)
        assert jnp.isclose(inner_product(m, one, one), 1.0)
        assert jnp.isclose(norm(m, one), 1.0)

    def test_exponentials_reduce_to_moment(self):
        m = AtomicMeasure.from_atoms([[-0.25, 0.5], [0.25, 0.5]])
        e = m.exponentials(1)
        assert jnp.isclose(inner_product(m, MuFunction(e[1]), MuFunction(e[0])), 0.0, atol=1e-15)

    def test_large_integer_phase(self):
        m = AtomicMeasure.from_atoms([[0.375, 1.0]])
        n = float(2**40 + 1)
        assert abs(complex(moment(m, n)) - cmath.exp(-0.75j * math.pi)) <= 1e-15
        assert abs(complex(m.exponentials(3)[3, 0]) - cmath.exp(2.25j * math.pi)) <= 1e-15

    def test_cauchy_schwarz_and_symmetry(self):
        m = random_atomic_measure(jax.random.PRNGKey(5), 8)
        f = random_function(jax.random.PRNGKey(6), m)
        g = random_function(jax.random.PRNGKey(7), m)
        assert jnp.abs(inner_product(m, f, g)) <= norm(m, f) * norm(m, g) + 1e-12
        assert jnp.isclose(inner_product(m, f, g), jnp.conj(inner_product(m, g, f)))
        assert inner_product(m, f, f).real >= 0

    def test_length_mismatch(self):
        m = AtomicMeasure.roots_of_unity(3)
        with pytest.raises(ValueError):
            inner_product(m, MuFunction(jnp.ones(3)), MuFunction(jnp.ones(4)))

    def test_fourier_transform_of_constant(self):
        m = random_atomic_measure(jax.random.PRNGKey(8), 4)
        z = jnp.array([0.3, -1.2 + 0.5j, 2j])
        assert jnp.allclose(fourier_transform(m, MuFunction.constant(m), z), fourier_stieltjes(m, z))


class TestIFSMeasure:
    def test_refine_depth_zero(self):
        refined = ifs_refine(IFSMeasure.middle_thirds(), 0)
        assert refined.n_atoms == 1
        assert jnp.allclose(refined.positions, 0.0)
        assert jnp.allclose(refined.weights, 1.0)

    def test_refine_middle_thirds(self):
        s = IFSMeasure.middle_thirds()
        one = ifs_refine(s, 1)
        assert jnp.allclose(one.positions, jnp.array([-1 / 3, 1 / 3]))
        assert jnp.allclose(one.weights, 0.5)
        two = ifs_refine(s, 2)
        assert jnp.allclose(two.positions, jnp.array([-4 / 9, -2 / 9, 2 / 9, 4 / 9]))
        assert jnp.allclose(two.weights, 0.25)

    def test_refine_weights_sum_to_one(self):
        s = IFSMeasure(0.3, jnp.array([-0.3, 0.05, 0.3]), jnp.array([0.2, 0.5, 0.3]), 0.45)
        for depth in range(0, 9):
            assert abs(float(jnp.sum(ifs_refine(s, depth).weights)) - 1.0) <= 1e-12

    def test_refine_merges_overlaps(self):
        s = IFSMeasure(0.5, jnp.array([-0.25, 0.0, 0.25]), jnp.full(3, 1 / 3), 0.5)
        refined = ifs_refine(s, 2)
        assert refined.n_atoms == 7
        index = int(jnp.argmin(jnp.abs(refined.positions - 0.125)))
        assert jnp.isclose(refined.weights[index], 2 / 9)

    def test_refine_merges_inexact_overlaps(self):
        # 0.3 / 3 and 0.1 differ by one ulp in floating point
        s = IFSMeasure(1 / 3, jnp.array([0.0, 0.1, 0.3]), jnp.full(3, 1 / 3), 0.45)
        refined = ifs_refine(s, 2)
        assert refined.n_atoms == 8
        assert float(jnp.min(jnp.diff(refined.positions))) > 1e-3
        index = int(jnp.argmin(jnp.abs(refined.positions - 0.1)))
        assert jnp.isclose(refined.weights[index], 2 / 9)
        assert abs(float(jnp.sum(refined.weights)) - 1.0) <= 1e-12

    def test_refine_cap(self):
        with pytest.raises(RefinementCapError) as err:
            ifs_refine(IFSMeasure.middle_thirds(), 21, cap=2**20)
        assert err.value.required == 2**21

    def test_moment_at_zero(self):
        value, depth = ifs_moment(IFSMeasure.middle_thirds(), 0.0, 1e-10)
        assert value == 1.0
        assert depth == 0

    def test_middle_thirds_product(self):
        value, depth = ifs_moment(IFSMeasure.middle_thirds(), 1.0, 1e-12)
        expected = math.prod(math.cos(2 * math.pi / 3**k) for k in range(1, 60))
        assert abs(complex(value) - expected) <= 1e-11
        assert depth > 0

    def test_imaginary_axis(self):
        value, _ = ifs_fourier_stieltjes(IFSMeasure.middle_thirds(), 0.5j, 1e-12)
        expected = math.prod(math.cosh(math.pi / 3**k) for k in range(1, 60))
        assert abs(complex(value) - expected) <= 1e-10

    def test_recursion_against_refinement(self):
        s = IFSMeasure.middle_thirds()
        refined = ifs_refine(s, 12)
        n = jnp.arange(-32, 33)
        value, _ = ifs_moment(s, n, 1e-10)
        assert jnp.max(jnp.abs(value - moment(refined, n))) <= 1e-6

    def test_support_interval(self):
        assert IFSMeasure.middle_thirds().support_interval() == pytest.approx((-0.5, 0.5))

    def test_invalid_systems(self):
        with pytest.raises(MeasureError):
            IFSMeasure(1.5, jnp.array([0.0]), jnp.array([1.0]), 0.4)
        with pytest.raises(MeasureError):
            IFSMeasure(0.5, jnp.array([0.0]), jnp.array([1.0]), 0.6)
        with pytest.raises(MeasureError):
            IFSMeasure(0.5, jnp.array([-0.4, 0.4]), jnp.array([0.5, 0.5]), 0.5)
        with pytest.raises(MeasureError):
            IFSMeasure(0.5, jnp.array([-0.1, 0.1]), jnp.array([0.5, 0.6]), 0.3)
