//! Exhaustive structural invariants: the conjugate property on all
//! small bands, agreement of the fast canonical keys with the
//! free-quotient decision, congruence-class shape of the relatively
//! free algebras, Whitman soundness/completeness at small depth, and
//! order-theoretic laws of the derived-variety operator.

mod common;

use common::{bands_up_to_iso, words_over};
use std::collections::HashMap;
use vardim::algebra::FiniteAlgebra;
use vardim::band::{fast_normalize, flatten, unflatten, Word};
use vardim::hypersub::{equivalent, Hypersubstitution};
use vardim::lattice::{
    axiom_report, builtin_model, dualize_identity, free_lattice_equal, lattice_axioms,
    BUILTIN_MODELS,
};
use vardim::registry::{self, DerivedTarget};
use vardim::term::{Signature, SymbolId, Term};

fn eval_word(alg: &FiniteAlgebra, w: &Word, env: &[usize]) -> usize {
    let mul = SymbolId(0);
    let ls = w.letters();
    let mut acc = env[ls[0]];
    for &l in &ls[1..] {
        acc = alg.op(mul, &[acc, env[l]]);
    }
    acc
}

/// Canonical first-appearance renumbering, for comparing partitions.
fn canonical_groups<T: std::hash::Hash + Eq>(keys: Vec<T>) -> Vec<usize> {
    let mut ids: HashMap<T, usize> = HashMap::new();
    let mut out = Vec::new();
    for k in keys {
        let next = ids.len();
        out.push(*ids.entry(k).or_insert(next));
    }
    out
}

/// All environments mapping three letters into `0..size`.
fn envs3(size: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// A word and its canonical form evaluate equally in every band with
/// at most four elements, under every environment. This checks the
/// canonical form against actual bands rather than against itself
/// (word equality is defined through the form).
#[test]
fn canonical_form_preserves_evaluation_in_small_bands() {
    let words = words_over(3, 6);
    let canonicals: Vec<Word> = words.iter().map(vardim::band::band_canonical).collect();
    for band in bands_up_to_iso(4) {
        for env in envs3(band.size()) {
            for (w, c) in words.iter().zip(&canonicals) {
                assert_eq!(
                    eval_word(&band, w, &env),
                    eval_word(&band, c, &env),
                    "canonical form of {w} drifts on a band of size {}",
                    band.size()
                );
            }
        }
    }
}

/// The derived algebra satisfies an identity exactly when the source
/// satisfies the derived identity: checked for every band with at most
/// four elements up to isomorphism, all six hypersubstitution classes,
/// and all identities in at most three variables of word length at
/// most four.
#[test]
fn conjugate_property_on_all_bands_up_to_four_elements() {
    let bands = bands_up_to_iso(4);
    let per_size = |n: usize| bands.iter().filter(|b| b.size() == n).count();
    assert_eq!(
        (per_size(1), per_size(2), per_size(3), per_size(4)),
        (1, 3, 10, 46),
        "band enumeration drifted"
    );

    let words = words_over(3, 4);
    // sigma applied to each word, precomputed
    let sig = Signature::band();
    let sigma_words: Vec<Vec<Word>> = (1..=6)
        .map(|k| {
            let sigma = Hypersubstitution::band_sigma(k).unwrap();
            words
                .iter()
                .map(|w| flatten(&sigma.apply(&unflatten(w)), &sig).unwrap())
                .collect()
        })
        .collect();

    for band in &bands {
        let envs = envs3(band.size());
        for (k, applied) in sigma_words.iter().enumerate() {
            let sigma = Hypersubstitution::band_sigma(k + 1).unwrap();
            let derived = band.derived_algebra(&sigma).unwrap();
            // value vector of each word over all environments: two
            // words form a satisfied identity iff their vectors match
            let in_derived: Vec<Vec<usize>> = words
                .iter()
                .map(|w| envs.iter().map(|e| eval_word(&derived, w, e)).collect())
                .collect();
            let in_source: Vec<Vec<usize>> = applied
                .iter()
                .map(|w| envs.iter().map(|e| eval_word(band, w, e)).collect())
                .collect();
            assert_eq!(
                canonical_groups(in_derived),
                canonical_groups(in_source),
                "conjugate property fails on a band of size {} under s{}",
                band.size(),
                k + 1
            );
        }
    }
}

/// Fast canonical keys agree with the free-quotient decision on every
/// pair of words over three letters with length at most six.
#[test]
fn fast_keys_agree_with_free_quotient_decision() {
    let reg = registry::shared();
    let words = words_over(3, 6);
    assert_eq!(words.len(), 1092);
    for v in reg.varieties() {
        let Some(fast) = v.fast_variety() else {
            continue;
        };
        let free = v.free_algebra(3).unwrap();
        let elements: Vec<usize> = words
            .iter()
            .map(|w| free.eval_word(w, &free.generators))
            .collect();
        let keys: Vec<String> = words
            .iter()
            .map(|w| fast_normalize(fast, w).to_string())
            .collect();
        assert_eq!(
            canonical_groups(elements),
            canonical_groups(keys),
            "fast path for {} disagrees with the free quotient",
            v.name()
        );
    }
}

/// In the three-generated relatively free algebras of the leftmost
/// varieties every congruence class has a constant first letter, and
/// dually for the rightmost ones.
#[test]
fn leftmost_and_rightmost_classes_are_constant() {
    let reg = registry::shared();
    for (name, first) in [
        ("V1", true),
        ("V3", true),
        ("V5", true),
        ("V2", false),
        ("V4", false),
        ("V6", false),
    ] {
        let free = reg.get(name).unwrap().free_algebra(3).unwrap();
        let mut letter_of_block: HashMap<usize, usize> = HashMap::new();
        for (element, word) in free.base_words.iter().enumerate() {
            let letter = if first { word.first() } else { word.last() };
            let block = free.base_block[element];
            match letter_of_block.get(&block) {
                None => {
                    letter_of_block.insert(block, letter);
                }
                Some(&l) => assert_eq!(l, letter, "{name}: block {block} mixes outer letters"),
            }
        }
    }
}

/// Inside RegB the association of a product does not matter after any
/// of the six hypersubstitutions.
#[test]
fn association_is_immaterial_in_regular_band_varieties() {
    let reg = registry::shared();
    let sig = Signature::band();
    let mul = sig.juxtaposition_symbol().unwrap();
    let words = words_over(3, 4);
    for v in reg.sublattice() {
        for k in 1..=6 {
            let sigma = Hypersubstitution::band_sigma(k).unwrap();
            for w in &words {
                if w.len() < 3 {
                    continue;
                }
                let right = unflatten(w);
                let mut left = Term::Var(w.letters()[0]);
                for &l in &w.letters()[1..] {
                    left = Term::App(mul, vec![left, Term::Var(l)]);
                }
                let lw = flatten(&sigma.apply(&left), &sig).unwrap();
                let rw = flatten(&sigma.apply(&right), &sig).unwrap();
                assert!(
                    v.holds_words(&lw, &rw).unwrap().is_none(),
                    "{}: s{k} distinguishes associations of {w}",
                    v.name()
                );
            }
        }
    }
}

/// Every relatively free algebra is a band.
#[test]
fn free_algebras_are_idempotent_and_associative() {
    let reg = registry::shared();
    let assoc = registry::band_associativity();
    let idem = registry::band_idempotency();
    for v in reg.varieties() {
        for n in 1..=3 {
            let free = v.free_algebra(n).unwrap();
            assert!(free.algebra.satisfies(&assoc), "{} on {n}", v.name());
            assert!(free.algebra.satisfies(&idem), "{} on {n}", v.name());
        }
    }
}

/// Identities of NB relate words of equal content: its axiom is
/// regular, and regular identities have regular consequences.
#[test]
fn normal_band_identities_preserve_content() {
    let reg = registry::shared();
    let free = reg.get("NB").unwrap().free_algebra(3).unwrap();
    let words = words_over(3, 6);
    let mut content_of_element: HashMap<usize, Vec<usize>> = HashMap::new();
    for w in &words {
        let element = free.eval_word(w, &free.generators);
        match content_of_element.get(&element) {
            None => {
                content_of_element.insert(element, w.content());
            }
            Some(c) => assert_eq!(c, &w.content(), "content differs inside a class: {w}"),
        }
    }
}

/// Deriving the free band on two generators by the first projection
/// yields left-zero multiplication on its six elements.
#[test]
fn first_projection_derives_left_zero_tables() {
    let reg = registry::shared();
    let fb2 = reg.get("B").unwrap().free_algebra(2).unwrap();
    let s1 = Hypersubstitution::band_sigma(1).unwrap();
    let derived = fb2.algebra.derived_algebra(&s1).unwrap();
    for a in 0..derived.size() {
        for b in 0..derived.size() {
            assert_eq!(derived.op(SymbolId(0), &[a, b]), a);
        }
    }
}

/// Congruence generation and quotient on the free band on two
/// generators: collapsing commutativity leaves the three-element
/// semilattice.
#[test]
fn commutativity_congruence_on_the_free_band() {
    let reg = registry::shared();
    let fb2 = reg.get("B").unwrap().free_algebra(2).unwrap();
    let index_of = |s: &str| fb2.words.iter().position(|w| w.to_string() == s).unwrap();
    let pairs = [(index_of("xy"), index_of("yx"))];
    let partition = fb2.algebra.congruence_generated(&pairs);
    assert_eq!(partition.num_blocks(), 3);
    let blocks = partition.blocks();
    let big = blocks.iter().find(|b| b.len() == 4).unwrap();
    for s in ["xy", "yx", "xyx", "yxy"] {
        assert!(big.contains(&index_of(s)), "{s} escaped the merged block");
    }
    // generating pairs hold in the quotient, and it is free for SL
    let quotient = fb2.algebra.quotient(&partition).unwrap();
    for (a, b) in pairs {
        assert_eq!(partition.block_of(a), partition.block_of(b));
    }
    let sl2 = reg.get("SL").unwrap().free_algebra(2).unwrap();
    assert!(quotient.isomorphic(&sl2.algebra).unwrap().is_some());
}

/// Congruence generation is monotone in the generating pairs and
/// idempotent.
#[test]
fn congruence_generation_is_monotone_and_idempotent() {
    let reg = registry::shared();
    let fb2 = reg.get("B").unwrap().free_algebra(2).unwrap();
    let n = fb2.size();
    let pair_sets: Vec<Vec<(usize, usize)>> = vec![
        vec![],
        vec![(0, 1)],
        vec![(2, 3)],
        vec![(0, 1), (2, 3)],
        vec![(4, 5), (0, 2)],
    ];
    for smaller in &pair_sets {
        for larger in &pair_sets {
            if !smaller.iter().all(|p| larger.contains(p)) {
                continue;
            }
            let a = fb2.algebra.congruence_generated(smaller);
            let b = fb2.algebra.congruence_generated(larger);
            assert!(a.refines(&b), "monotonicity fails");
        }
    }
    for pairs in &pair_sets {
        let once = fb2.algebra.congruence_generated(pairs);
        let again_pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| once.same_block(a, b))
            .collect();
        let twice = fb2.algebra.congruence_generated(&again_pairs);
        assert_eq!(once, twice, "idempotence fails");
    }
}

/// Whitman's procedure is sound for every stored model and complete at
/// depth two: terms are equal in the free lattice iff no model of size
/// at most five separates them.
#[test]
fn whitman_matches_small_models_at_depth_two() {
    let vars: Vec<Term> = (0..3).map(Term::Var).collect();
    let mut depth1 = vars.clone();
    for op in [SymbolId(0), SymbolId(1)] {
        for a in &vars {
            for b in &vars {
                depth1.push(Term::App(op, vec![a.clone(), b.clone()]));
            }
        }
    }
    let mut terms = depth1.clone();
    for op in [SymbolId(0), SymbolId(1)] {
        for a in &depth1 {
            for b in &depth1 {
                terms.push(Term::App(op, vec![a.clone(), b.clone()]));
            }
        }
    }

    // Whitman classes
    let mut reps: Vec<Term> = Vec::new();
    let class_of: Vec<usize> = terms
        .iter()
        .map(
            |t| match reps.iter().position(|r| free_lattice_equal(r, t).unwrap()) {
                Some(i) => i,
                None => {
                    reps.push(t.clone());
                    reps.len() - 1
                }
            },
        )
        .collect();
    assert_eq!(reps.len(), 23, "depth-two class count drifted");

    // valuation vector of each term across all builtin models
    let models: Vec<_> = BUILTIN_MODELS
        .iter()
        .map(|n| builtin_model(n).unwrap())
        .collect();
    let valuations: Vec<Vec<usize>> = terms
        .iter()
        .map(|t| {
            let mut vals = Vec::new();
            for m in &models {
                for env in envs3(m.size()) {
                    let e: std::collections::BTreeMap<usize, usize> =
                        (0..3).map(|v| (v, env[v])).collect();
                    vals.push(m.algebra().evaluate(t, &e).unwrap());
                }
            }
            vals
        })
        .collect();
    assert_eq!(
        canonical_groups(class_of.clone()),
        canonical_groups(valuations),
        "free-lattice equality and model separation disagree at depth two"
    );
}

/// Dualized axioms still axiomatize lattices, and dualizing twice is
/// the identity on derived tables.
#[test]
fn dualization_involutes_and_preserves_the_axioms() {
    let swap = Hypersubstitution::parse("join:=x^y,meet:=xvy", &Signature::lattice()).unwrap();
    for name in BUILTIN_MODELS {
        let m = builtin_model(name).unwrap();
        for (_, axiom) in lattice_axioms() {
            assert!(m.algebra().satisfies(&dualize_identity(&axiom)), "{name}");
        }
        let once = m.algebra().derived_algebra(&swap).unwrap();
        assert!(axiom_report(&once)
            .unwrap()
            .iter()
            .all(|c| c.witness.is_none()));
        let twice = once.derived_algebra(&swap).unwrap();
        let join = SymbolId(0);
        let meet = SymbolId(1);
        assert_eq!(twice.table(join), m.algebra().table(join), "{name}");
        assert_eq!(twice.table(meet), m.algebra().table(meet), "{name}");
    }
}

/// A memoized derived-variety table over the thirteen varieties and
/// the six classes; every entry lands in the registry.
fn derived_table() -> HashMap<(String, usize), String> {
    let reg = registry::shared();
    let mut table = HashMap::new();
    for v in reg.sublattice() {
        for k in 1..=6 {
            let sigma = Hypersubstitution::band_sigma(k).unwrap();
            match reg.derived_variety(v, &sigma).unwrap() {
                DerivedTarget::Registry(w) => {
                    table.insert((v.name().to_string(), k), w.name().to_string());
                }
                DerivedTarget::Outside { .. } => {
                    panic!("{} left the registry under s{k}", v.name())
                }
            }
        }
    }
    table
}

/// The derived operator is monotone, fixed by the trivial
/// hypersubstitution, and respects equivalence of hypersubstitutions.
#[test]
fn derived_operator_laws() {
    let reg = registry::shared();
    let table = derived_table();
    let get = |v: &str, k: usize| reg.get(&table[&(v.to_string(), k)]).unwrap();

    for v in reg.sublattice() {
        assert_eq!(
            table[&(v.name().to_string(), 3)],
            v.name(),
            "identity class"
        );
    }

    for small in reg.sublattice() {
        for big in reg.sublattice() {
            if !reg.contains(big, small).unwrap() {
                continue;
            }
            for k in 1..=6 {
                let ds = get(small.name(), k);
                let db = get(big.name(), k);
                assert!(
                    reg.contains(db, ds).unwrap(),
                    "monotonicity fails: {} ⊆ {} but s{k} images are not nested",
                    small.name(),
                    big.name()
                );
            }
        }
    }

    // equivalent hypersubstitutions derive the same variety
    for v in reg.sublattice() {
        for i in 1..=6usize {
            for j in (i + 1)..=6 {
                let si = Hypersubstitution::band_sigma(i).unwrap();
                let sj = Hypersubstitution::band_sigma(j).unwrap();
                if equivalent(&si, &sj, v).unwrap() {
                    assert_eq!(
                        table[&(v.name().to_string(), i)],
                        table[&(v.name().to_string(), j)],
                        "{}: s{i} ~ s{j} but targets differ",
                        v.name()
                    );
                }
            }
        }
    }
}

/// Equivalence modulo a variety is reflexive, symmetric and transitive
/// on the six classes.
#[test]
fn sigma_equivalence_is_an_equivalence_relation() {
    let reg = registry::shared();
    let sigmas: Vec<_> = (1..=6)
        .map(|k| Hypersubstitution::band_sigma(k).unwrap())
        .collect();
    for v in reg.varieties() {
        let eq = |i: usize, j: usize| equivalent(&sigmas[i], &sigmas[j], v).unwrap();
        for i in 0..6 {
            assert!(eq(i, i));
            for j in 0..6 {
                assert_eq!(eq(i, j), eq(j, i));
                for k in 0..6 {
                    if eq(i, j) && eq(j, k) {
                        assert!(eq(i, k), "{}: transitivity", v.name());
                    }
                }
            }
        }
    }
}

/// Solid varieties contain all their derived varieties, verified from
/// the reports rather than assumed.
#[test]
fn solid_closure_for_rb_nb_regb() {
    let reg = registry::shared();
    for name in ["RB", "NB", "RegB"] {
        let v = reg.get(name).unwrap();
        for target in reg.derived_set(v).unwrap() {
            let w = reg.get(&target).unwrap();
            assert!(
                reg.contains(v, w).unwrap(),
                "{name} does not contain derived {target}"
            );
        }
    }
}

/// Certificate verdict breakdown for the distributive variety: one
/// trivial class, one selfdual swap class, fourteen excluded by axiom
/// witnesses.
#[test]
fn distributive_certificate_breakdown() {
    use vardim::lattice::{
        distributivity_axiom, fluidity_certificate, named_lattice_axioms, SigmaVerdict,
    };
    let mut axioms = named_lattice_axioms();
    axioms.push(("distributivity".into(), distributivity_axiom()));
    let report = fluidity_certificate(&[builtin_model("chain2").unwrap()], &axioms, 64).unwrap();
    assert_eq!(report.dimension, 0);
    let mut equals = 0;
    let mut selfdual = 0;
    let mut excluded = 0;
    for e in &report.entries {
        match e.verdict {
            SigmaVerdict::EqualsVariety => equals += 1,
            SigmaVerdict::DualSelfdual => selfdual += 1,
            SigmaVerdict::NotIncluded { .. } => excluded += 1,
            _ => panic!("unexpected verdict"),
        }
    }
    assert_eq!((equals, selfdual, excluded), (1, 1, 14));
}

/// Dimension zero coincides with fluidity for every nontrivial
/// registry variety, and the trivial variety is vacuously fluid.
#[test]
fn dimension_fluid_coherence() {
    let reg = registry::shared();
    for v in reg.sublattice() {
        let class = reg.classify(v).unwrap();
        if v.name() != "T" {
            assert_eq!(class.fluid, class.dimension == 0, "{}", v.name());
        } else {
            assert!(class.fluid && class.dimension == 0);
        }
    }
}
