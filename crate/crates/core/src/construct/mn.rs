//! The `tau_h` construction on a concentric group `H`.
//!
//! Points are the canonical indices of the elements of `H`. For `b` in `B`,
//! `tau_h` sends `b` to `phi(b)` and `a_n b` to `a_1 h phi(b)`. The group
//! `G = <tau_h, R(H)>` then acts on the cosets of `R(H)` as a tetravalent
//! half-arc-transitive coset graph.

use num_bigint::BigUint;
use thiserror::Error;

use crate::check::Check;
use crate::concentric::ConcentricSequence;
use crate::elements::{ElementSet, DEFAULT_ELEMENT_CAP};
use crate::group::PermutationGroup;
use crate::perm::{PermError, Permutation};
use crate::presentation::regular_rep_from_multiplication;
use crate::subgroup::{core_of, double_coset_witness, index_of_self_intersection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MnError {
    #[error("{0} is not an element of B")]
    NotInB(Permutation),
    /// `h` lies outside `C`, so `a_1 h C` meets `C` and two points collide.
    #[error("tau_h is not a permutation: points {first} and {second} both map to {target}")]
    NotAPermutation { first: usize, second: usize, target: usize },
    #[error("H is abelian")]
    AbelianH,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// `tau_h` on the canonical element order of `H`.
pub fn build_tau_h(seq: &ConcentricSequence, h: &Permutation) -> Result<Permutation, MnError> {
    let hs = seq.h_set();
    let b = seq.b_set();
    if !b.contains(h) {
        return Err(MnError::NotInB(h.clone()));
    }
    let n = seq.n();
    let a1h = seq.gens()[0].then(h);
    let an = &seq.gens()[n - 1];
    let index = |x: &Permutation| hs.index_of(x).expect("H is closed");
    let mut images = vec![u32::MAX; hs.len()];
    let mut source = vec![usize::MAX; hs.len()];
    let mut assign = |from: usize, to: usize| -> Result<(), MnError> {
        if source[to] != usize::MAX {
            return Err(MnError::NotAPermutation {
                first: source[to] + 1,
                second: from + 1,
                target: to + 1,
            });
        }
        source[to] = from;
        images[from] = to as u32;
        Ok(())
    };
    for (i, x) in b.iter().enumerate() {
        let fx = seq.c_set().get(seq.phi_table()[i]);
        assign(index(x), index(fx))?;
        assign(index(&an.then(x)), index(&a1h.then(fx)))?;
    }
    Ok(Permutation::from_images(images)?)
}

/// `R(a_1)..R(a_n)` on the canonical element order of `H`.
pub fn regular_generators(seq: &ConcentricSequence) -> Vec<Permutation> {
    regular_rep_from_multiplication(seq.h_set(), seq.gens())
}

/// The 1-based `i` for which `tau^-1 R(a_i) tau != R(a_{i+1})`.
pub fn conjugation_failures(regular: &[Permutation], tau: &Permutation) -> Vec<usize> {
    regular
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].conjugate(tau) != w[1])
        .map(|(i, _)| i + 1)
        .collect()
}

#[derive(Debug, Clone)]
pub struct MnInstance {
    pub sequence: ConcentricSequence,
    pub h: Permutation,
    pub tau_h: Permutation,
    /// `R(a_1)..R(a_n)`.
    pub regular_gens: Vec<Permutation>,
    /// `R(H)` as an element set.
    pub regular_set: ElementSet,
    /// `<R(a_1)..R(a_n), tau_h>`.
    pub group: PermutationGroup,
    pub checks: Vec<Check>,
}

impl MnInstance {
    /// Canonical index of the identity of `H`, fixed by `tau_h`.
    pub fn identity_point(&self) -> usize {
        self.sequence
            .h_set()
            .index_of(&Permutation::identity(self.sequence.degree()))
            .expect("identity is an element")
    }

    pub fn passed(&self) -> bool {
        crate::check::all_pass(&self.checks)
    }
}

/// Builds `tau_h` and `G`, and computes every certificate check.
pub fn build_mn_instance(seq: &ConcentricSequence, h: &Permutation, seed: u64) -> Result<MnInstance, MnError> {
    if seq.h_set().is_abelian() {
        return Err(MnError::AbelianH);
    }
    let tau = build_tau_h(seq, h)?;
    let regular = regular_generators(seq);
    let degree = seq.h_set().len();
    let regular_set = ElementSet::generate(degree, &regular, DEFAULT_ELEMENT_CAP)?;
    let mut gens = regular.clone();
    gens.push(tau.clone());
    let group = PermutationGroup::with_seed(gens, seed)?;

    let mut checks = Vec::new();
    let core = core_of(&regular_set, &group);
    checks.push(Check::new(
        "core_free",
        "the core of R(H) in G is trivial",
        core.is_trivial(),
        (!core.is_trivial()).then(|| format!("core has order {}", core.len())),
    ));
    let same = double_coset_witness(&regular_set, &tau);
    checks.push(Check::new(
        "double_cosets_unequal",
        "R(H) tau_h R(H) differs from R(H) tau_h^-1 R(H)",
        same.is_none(),
        same.map(|x| format!("tau_h {x} tau_h lies in R(H)")),
    ));
    let index = index_of_self_intersection(&regular_set, &tau);
    let shifted = ElementSet::generate(degree, &regular[1..], DEFAULT_ELEMENT_CAP)?;
    let meet = regular_set.intersection(&regular_set.conjugate(&tau));
    checks.push(Check::new(
        "intersection_index",
        "|R(H) : R(H) ∩ R(H)^tau_h| = 2",
        index == 2 && meet == shifted,
        Some(format!(
            "index {index}; intersection {} <R(a_2)..R(a_n)>",
            if meet == shifted { "equals" } else { "differs from" }
        )),
    ));
    let small = PermutationGroup::with_seed(vec![regular[0].clone(), tau.clone()], seed)?;
    let generated = small.same_group(&group);
    checks.push(Check::new(
        "generation",
        "G = <R(a_1), tau_h>",
        generated,
        (!generated).then(|| format!("<R(a_1), tau_h> has order {}", small.order())),
    ));
    let id = seq
        .h_set()
        .index_of(&Permutation::identity(seq.degree()))
        .expect("identity is an element");
    let stab = group.point_stabilizer(id)?;
    let order = group.order();
    let ok = stab.order() * BigUint::from(degree) == order && group.transitivity_flags().transitive;
    checks.push(Check::new(
        "stabilizer_order",
        "|G_1| = |G| / 2^n",
        ok,
        Some(format!("|G| = {order}, |G_1| = {}", stab.order())),
    ));
    let fails = conjugation_failures(&regular, &tau);
    checks.push(Check::new(
        "shift_conjugation",
        "tau_h^-1 R(a_i) tau_h = R(a_{i+1})",
        fails.is_empty(),
        fails.first().map(|i| format!("fails at i = {i}")),
    ));
    Ok(MnInstance {
        sequence: seq.clone(),
        h: h.clone(),
        tau_h: tau,
        regular_gens: regular,
        regular_set,
        group,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concentric::{check_concentric, d8_fixture};

    fn cyc(d: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(d, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn klein_tau_fixes_identity_and_shifts() {
        let a1 = cyc(4, &[&[1, 2], &[3, 4]]);
        let a2 = cyc(4, &[&[1, 3], &[2, 4]]);
        let seq = check_concentric(&[a1.clone(), a2.clone()]).unwrap();
        let tau = build_tau_h(&seq, &Permutation::identity(4)).unwrap();
        let hs = seq.h_set();
        let idx = |x: &Permutation| hs.index_of(x).unwrap();
        // e -> e, a1 -> a2, a2 -> a1, a2 a1 -> a1 a2 (= a2 a1)
        let e = Permutation::identity(4);
        assert_eq!(tau.image(idx(&e)), idx(&e));
        assert_eq!(tau.image(idx(&a1)), idx(&a2));
        assert_eq!(tau.image(idx(&a2)), idx(&a1));
        let c = a1.then(&a2);
        assert_eq!(tau.image(idx(&c)), idx(&c));
        assert!(conjugation_failures(&regular_generators(&seq), &tau).is_empty());
        assert_eq!(build_mn_instance(&seq, &e, 1).unwrap_err(), MnError::AbelianH);
    }

    #[test]
    fn d8_identity_passes() {
        let seq = check_concentric(&d8_fixture()).unwrap();
        let inst = build_mn_instance(&seq, &Permutation::identity(8), 1).unwrap();
        assert!(inst.passed(), "{:?}", inst.checks);
        assert!(inst.tau_h.fixes(inst.identity_point()));
    }

    #[test]
    fn h_outside_c_collides() {
        let seq = check_concentric(&d8_fixture()).unwrap();
        // B = <s, r^2>, C = <r^2, rs>, so s is in B but not in C
        let s = seq.gens()[0].clone();
        assert!(matches!(build_tau_h(&seq, &s), Err(MnError::NotAPermutation { .. })));
        assert!(matches!(build_tau_h(&seq, &seq.gens()[2]), Err(MnError::NotInB(_))));
    }
}
