"""
Tests for the unitary groups and their point stabilizers
"""
import numpy as np
from django.test import SimpleTestCase

from groups import enumeration
from groups.exceptions import CapExceeded, CaseError, FormError
from groups.ff import find_of_order, make_tower
from groups.unitary import (ANTIDIAG, IDENTITY, CaseTag, UnitaryContext,
                            parse_case, pgu_order, psu_order,
                            stabilizer_order, subfield_index)


def make_context(p, m=1, modulus_rank=0):
    return UnitaryContext(make_tower(p, m, modulus_rank))


class OrderTests(SimpleTestCase):
    """Tests for the order formulas"""

    def test_group_orders(self):
        """Test |PSU(3,q)| and |PGU(3,q)| for small q"""
        self.assertEqual(psu_order(3), 6048)
        self.assertEqual(psu_order(4), 62400)
        self.assertEqual(psu_order(5), 126000)
        self.assertEqual(pgu_order(5), 378000)

    def test_stabilizer_orders(self):
        """Test the degrees 1050 and 525 at q = 5"""
        self.assertEqual(psu_order(5) // stabilizer_order('so', 5), 1050)
        self.assertEqual(psu_order(5) // stabilizer_order('sl', 5), 525)
        self.assertEqual(psu_order(7) // stabilizer_order('sl', 7), 2107)

    def test_subfield_index(self):
        """Test c = ((q+1)/(q'+1), 3)"""
        self.assertEqual(subfield_index(64, 4), 1)
        self.assertEqual(subfield_index(125, 5), 3)


class CaseTests(SimpleTestCase):
    """Tests for case tags"""

    def test_parse_case(self):
        """Test case strings are parsed and normalised"""
        self.assertEqual(parse_case('SO'), CaseTag('so'))
        self.assertEqual(parse_case(' sl '), CaseTag('sl'))
        self.assertEqual(parse_case('subfield:4'), CaseTag('subfield', 4))
        self.assertEqual(str(parse_case('subfield:4')), 'subfield:4')

    def test_parse_case_rejects_garbage(self):
        """Test unknown cases and bad subfield orders raise CaseError"""
        with self.assertRaises(CaseError):
            parse_case('bogus')
        with self.assertRaises(CaseError):
            parse_case('subfield:x')

    def test_so_needs_odd_q(self):
        """Test the SO case is refused in characteristic 2"""
        with self.assertRaises(CaseError):
            make_context(2, 2).check_case('so')

    def test_subfield_must_be_odd_degree(self):
        """Test q' must give an odd degree proper extension"""
        ctx = make_context(2, 2)

        with self.assertRaises(CaseError):
            ctx.check_case('subfield:2')
        with self.assertRaises(CaseError):
            ctx.check_case('subfield:3')

    def test_subfield_of_order_two(self):
        """Test q' = 2 at q = 8 names a subgroup but no coset action"""
        ctx = make_context(2, 3)

        self.assertEqual(ctx.check_case('subfield:2'), CaseTag('subfield', 2))
        with self.assertRaises(CaseError):
            ctx.check_action_case('subfield:2')
        with self.assertRaises(CaseError):
            ctx.stabilizer_generators('subfield:2')
        self.assertEqual(ctx.check_action_case('sl'), CaseTag('sl'))


class ConstructorTests(SimpleTestCase):
    """Tests for the named matrices"""

    def setUp(self):
        self.ctx = make_context(5)
        F = self.ctx.F
        codes = F.elements()
        self.b0 = int(codes[np.asarray(F.add(F.trace(codes), 1)) == 0].min())

    def test_q_elem_is_unitary(self):
        """Test q(1, b) preserves the antidiagonal form"""
        x = self.ctx.q_elem(1, self.b0)

        self.assertEqual(x.form, ANTIDIAG)
        self.assertTrue(self.ctx.is_unitary(x))
        self.assertTrue(self.ctx.is_special(self.ctx.to_form(x, IDENTITY)))

    def test_q_elem_checks_its_constraint(self):
        """Test q(a, b) with b + conj(b) + N(a) != 0 raises FormError"""
        with self.assertRaises(FormError):
            self.ctx.q_elem(1, 0)

    def test_h_and_tau_are_unitary(self):
        """Test h(k) and tau preserve the antidiagonal form"""
        k = int(self.ctx.F.exp[1])

        self.assertTrue(self.ctx.is_unitary(self.ctx.h_elem(k)))
        self.assertTrue(self.ctx.is_unitary(self.ctx.tau()))
        with self.assertRaises(FormError):
            self.ctx.h_elem(0)

    def test_transport_preserves_unitarity(self):
        """Test the transition matrix carries J-unitary to I-unitary"""
        x = self.ctx.to_form(self.ctx.tau(), IDENTITY)

        self.assertEqual(x.form, IDENTITY)
        self.assertTrue(self.ctx.is_unitary(x))

    def test_generators_lie_in_psu(self):
        """Test the generating triple is unitary with cube determinants"""
        gens = self.ctx.psu_generators()

        self.assertTrue(np.all(self.ctx.is_unitary(gens)))
        self.assertTrue(np.all(self.ctx.in_psu(gens)))

    def test_generators_generate(self):
        """Test the generating triple lists PSU(3,3) and PSU(3,4)"""
        for p, m, order in ((3, 1, 6048), (2, 2, 62400)):
            ctx = make_context(p, m)
            keys = enumeration.closure(ctx.ops, ctx.psu_generators())
            self.assertEqual(len(keys), order)

    def test_generators_under_another_modulus(self):
        """Test a second modulus gives a group of the same order"""
        ctx = make_context(3, 1, modulus_rank=1)
        keys = enumeration.closure(ctx.ops, ctx.psu_generators())

        self.assertEqual(len(keys), 6048)


class OuterAutomorphismTests(SimpleTestCase):
    """Tests for delta and f"""

    def test_delta_outer_order(self):
        """Test delta has order d modulo PSU(3,q)"""
        for p, m, d in ((5, 1, 3), (2, 2, 1)):
            ctx = make_context(p, m)
            self.assertEqual(ctx.outer_order(ctx.delta()), d)

    def test_delta_is_not_in_psu_when_d_is_3(self):
        """Test delta lies in PGU but outside PSU at q = 5"""
        ctx = make_context(5)
        delta = ctx.delta()

        self.assertTrue(ctx.is_unitary(delta.proj))
        self.assertFalse(ctx.in_psu(delta.proj))

    def test_field_automorphism_conjugates_delta(self):
        """Test f^-1 delta f = delta^p"""
        ctx = make_context(5)
        f = ctx.field_auto(1)

        self.assertEqual(f.inverse() * ctx.delta() * f, ctx.delta() ** 5)

    def test_apply_field_auto(self):
        """Test Frobenius powers 0 and m twice fix h(xi), power 1 moves it"""
        ctx = make_context(2, 2)
        x = ctx.projectivize(ctx.h_elem(int(ctx.F.exp[1])), ANTIDIAG)

        self.assertEqual(ctx.apply_field_auto(x, 0), x)
        self.assertEqual(
            ctx.apply_field_auto(ctx.apply_field_auto(x, 2), 2), x)
        self.assertNotEqual(ctx.apply_field_auto(x, 1), x)

    def test_field_automorphism_order(self):
        """Test f has order 2m"""
        ctx = make_context(2, 2)

        self.assertEqual(ctx.field_auto(1).order(), 4)


class StabilizerTests(SimpleTestCase):
    """Tests for the point stabilizers"""

    def test_so_stabilizer_elements(self):
        """Test SO(3,5) has 120 elements, all accepted by its oracle"""
        ctx = make_context(5)
        keys = ctx.stabilizer_elements('so')
        member = ctx.membership_oracle('so')

        self.assertEqual(len(keys), 120)
        self.assertTrue(np.all(member(ctx.ops.from_keys(keys))))

    def test_stabilizer_generators_generate(self):
        """Test the chosen generators give back the whole stabilizer"""
        ctx = make_context(5)
        for case in ('so', 'sl'):
            gens = ctx.stabilizer_generators(case)
            keys = enumeration.closure(ctx.ops, gens)
            self.assertEqual(len(keys), stabilizer_order(case, 5))

    def test_subgroup_membership(self):
        """Test membership of single elements"""
        ctx = make_context(5)
        tau = ctx.to_form(ctx.tau(), IDENTITY)

        self.assertTrue(ctx.subgroup_membership('sl', ctx.diag(1, 1, 1)))
        self.assertFalse(ctx.subgroup_membership('sl', tau))

    def test_sl_membership_at_q5(self):
        """Test the 240 elements of the point stabilizer pass its oracle"""
        ctx = make_context(5)
        keys = ctx.stabilizer_elements('sl')
        member = ctx.membership_oracle('sl')

        self.assertEqual(len(keys), 240)
        self.assertTrue(np.all(member(ctx.ops.from_keys(keys))))
        self.assertFalse(member(ctx.to_form(ctx.tau(), IDENTITY).array))

    def test_sl_generators_at_q4(self):
        """Test the explicit generators give all 300 elements at q = 4"""
        ctx = make_context(2, 2)
        gens = ctx.stabilizer_generators('sl')

        self.assertEqual(len(gens), 4)
        self.assertEqual(len(enumeration.closure(ctx.ops, gens)), 300)

    def test_generators_without_packed_keys(self):
        """Test sl generators at q = 13 and the so listing refusal"""
        ctx = make_context(13)
        gens = ctx.stabilizer_generators('sl')

        self.assertFalse(ctx.ops.packable)
        self.assertTrue(np.all(ctx.is_unitary(gens)))
        self.assertTrue(np.all(ctx.in_psu(gens)))
        self.assertTrue(np.all(ctx.membership_oracle('sl')(gens)))
        with self.assertRaises(CapExceeded):
            ctx.stabilizer_generators('so')

    def test_subfield_membership_at_q8(self):
        """Test matrices over F_4 lie in the q' = 2 subgroup, F_64 ones not"""
        ctx = make_context(2, 3)
        member = ctx.membership_oracle('subfield:2')
        omega = find_of_order(ctx.F, 3)
        xi = int(ctx.F.exp[1])

        self.assertTrue(ctx.subgroup_membership(
            'subfield:2', ctx.diag(omega, 1, 1)))
        self.assertFalse(ctx.subgroup_membership(
            'subfield:2', ctx.diag(xi, 1, 1)))
        self.assertTrue(member(ctx.ops.identity(1))[0])


def trace_partner(ctx, a):
    """Least b with b + conj(b) + N(a) = 0."""
    F = ctx.F
    codes = F.elements()
    return int(codes[np.asarray(F.add(F.trace(codes), F.norm(a))) == 0]
               .min())


class RelationTests(SimpleTestCase):
    """Tests for the relations between q(a, b), h(k) and tau"""

    def setUp(self):
        self.ctx = make_context(5)
        self.F = self.ctx.F
        self.xi = int(self.F.exp[1])

    def assert_same(self, x, y):
        np.testing.assert_array_equal(np.asarray(x), np.asarray(y))

    def test_q_elements_multiply(self):
        """Test q(a,b) q(c,e) = q(a+c, b+e-a conj(c))"""
        ctx, F = self.ctx, self.F
        a, c = 1, self.xi
        b, e = trace_partner(ctx, a), trace_partner(ctx, c)
        prod = ctx.ops.mul(ctx.q_elem(a, b).array, ctx.q_elem(c, e).array)
        expected = ctx.q_elem(F.add(a, c),
                              F.sub(F.add(b, e), F.mul(a, F.conj(c))))

        self.assert_same(prod, expected.array)

    def test_q_inverse(self):
        """Test q(a,b)^-1 = q(-a, conj(b))"""
        ctx, F = self.ctx, self.F
        a = self.xi
        b = trace_partner(ctx, a)
        x = ctx.q_elem(a, b).array

        self.assert_same(ctx.ops.inv(x),
                         ctx.q_elem(F.neg(a), F.conj(b)).array)

    def test_h_normalises_q(self):
        """Test h(k)^-1 q(a,b) h(k) = q(a k^(2q-1), b k^(q+1))"""
        ctx, F, k, q = self.ctx, self.F, self.xi, self.ctx.q
        a = self.xi
        b = trace_partner(ctx, a)
        h = ctx.h_elem(k).array
        conj = ctx.ops.mul_chain(ctx.ops.inv(h), ctx.q_elem(a, b).array, h)
        expected = ctx.q_elem(F.mul(a, F.power(k, 2 * q - 1)),
                              F.mul(b, F.power(k, q + 1)))

        self.assert_same(conj, expected.array)

    def test_tau_inverts_h(self):
        """Test tau^2 = 1 and tau h(k) tau = h(k^-q)"""
        ctx, F = self.ctx, self.F
        tau = ctx.tau().array

        self.assert_same(ctx.ops.mul(tau, tau), np.eye(3, dtype=np.int64))
        self.assert_same(
            ctx.ops.mul_chain(tau, ctx.h_elem(self.xi).array, tau),
            ctx.h_elem(F.power(self.xi, -ctx.q)).array)


class BorelTests(SimpleTestCase):
    """Tests for Q and H in the antidiagonal form"""

    def unipotent_generators(self, ctx):
        F = ctx.F
        codes = F.elements()
        eps = int(codes[(np.asarray(F.trace(codes)) == 0)
                        & (codes != 0)].min())
        zeta = find_of_order(F, ctx.q - 1).code
        gens = [ctx.q_elem(0, F.mul(eps, F.power(zeta, i)))
                for i in range(ctx.m)]
        for i in range(2 * ctx.m):
            a = F.power(self.xi(ctx), i)
            gens.append(ctx.q_elem(a, trace_partner(ctx, a)))
        return np.stack([g.array for g in gens])

    @staticmethod
    def xi(ctx):
        return int(ctx.F.exp[1])

    def test_q_order_and_centre(self):
        """Test |Q| = q^3 with a centre of order q"""
        for p, m in ((2, 2), (5, 1), (7, 1)):
            ctx = make_context(p, m)
            ops, q = ctx.ops, ctx.q
            gens = self.unipotent_generators(ctx)
            elements = ops.from_keys(enumeration.closure(ops, gens))
            central = np.ones(len(elements), dtype=bool)
            for g in gens:
                central &= ops.canonical_keys(ops.mul(elements, g)) \
                    == ops.canonical_keys(ops.mul(g, elements))

            self.assertEqual(len(elements), q ** 3, q)
            self.assertEqual(int(central.sum()), q, q)

    def test_h_is_cyclic(self):
        """Test <h(xi)> has order (q^2-1)/d modulo scalars"""
        for p, m in ((2, 2), (5, 1), (7, 1)):
            ctx = make_context(p, m)
            q, ops = ctx.q, ctx.ops
            h = ctx.h_elem(self.xi(ctx)).array
            expected = (q * q - 1) // ctx.d

            self.assertEqual(int(ops.projective_orders(h[None], q * q)[0]),
                             expected, q)
            self.assertEqual(len(enumeration.closure(ops, h[None])),
                             expected, q)


class ScalarTests(SimpleTestCase):
    """Tests for the central scalars"""

    def test_scalar_count_at_q5(self):
        """Test there are q + 1 scalars, each a (q+1)-th root of unity"""
        ctx = make_context(5)

        self.assertEqual(len(ctx.scalars), 6)
        self.assertTrue(np.all(np.asarray(ctx.F.power(ctx.scalars, 6)) == 1))
        self.assertEqual(len(np.unique(ctx.scalars)), 6)

    def test_projectivize_ignores_scalars(self):
        """Test lambda x and x have the same projective image"""
        ctx = make_context(5)
        x = ctx.to_form(ctx.q_elem(1, trace_partner(ctx, 1)), IDENTITY)
        image = ctx.projectivize(x)

        for mu in ctx.scalars:
            self.assertEqual(ctx.projectivize(ctx.ops.scale(x.array, mu)),
                             image)
        self.assertTrue(ctx.is_trivial(
            ctx.projectivize(ctx.diag(ctx.mu, ctx.mu, ctx.mu))))
