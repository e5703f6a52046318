//! The decidable equational theory of bands and their subvarieties.
//!
//! Words over variable letters stand for band terms; associativity
//! licenses flattening. Equality of words in the free band is decided
//! by the Green–Rees characterization: two words are equal iff they
//! have the same content, the same prefix part up to the letter
//! completing the content (recursively), and dually the same suffix
//! part. Relatively free algebras `F_V(n)` arise as quotients of the
//! free band by the congruence generated by all element instances of
//! the variety's axioms; they decide every identity in at most `n`
//! variables.

use crate::algebra::{for_each_tuple, CongruenceBuilder, FiniteAlgebra};
use crate::term::{parse_identity, var_name, Identity, Signature, SymbolId, Term};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

/// Default cap on free-algebra generators; the free band on four
/// generators has 332,380 elements and is rejected unless the cap is
/// raised.
pub const DEFAULT_GENERATOR_CAP: usize = 3;

/// A nonempty sequence of variable letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Word> {
        if letters.is_empty() {
            return Err(Error::SignatureMismatch("empty word".into()));
        }
        Ok(Word(letters))
    }

    /// Parses a juxtaposed letter string such as `zxy` or `x4yx4`.
    pub fn parse(text: &str) -> Result<Word> {
        let letters = crate::term::split_word(text.trim())
            .ok_or_else(|| Error::UnknownVariable(text.trim().to_string()))?;
        Word::new(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Words are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    /// Distinct letters, sorted.
    pub fn content(&self) -> Vec<usize> {
        let mut c = self.0.clone();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Distinct letters in order of first occurrence.
    pub fn first_occurrences(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for &l in &self.0 {
            if !seen.contains(&l) {
                seen.push(l);
            }
        }
        seen
    }

    /// Distinct letters ordered by the position of their last
    /// occurrence.
    pub fn last_occurrences(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for &l in self.0.iter().rev() {
            if !seen.contains(&l) {
                seen.push(l);
            }
        }
        seen.reverse();
        seen
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            write!(f, "{}", var_name(l))?;
        }
        Ok(())
    }
}

/// In-order leaf sequence of a band term. The signature must consist
/// of the single binary symbol.
pub fn flatten(t: &Term, sig: &Signature) -> Result<Word> {
    if sig.len() != 1 || sig.symbol(SymbolId(0)).arity != 2 {
        return Err(Error::SignatureMismatch(
            "flattening needs the single-binary-symbol signature".into(),
        ));
    }
    t.check_signature(sig)?;
    Word::new(t.var_leaves())
}

/// The right-associated band term spelling a word.
pub fn unflatten(w: &Word) -> Term {
    let sig = Signature::band();
    let mul = sig.juxtaposition_symbol().unwrap();
    let ls = w.letters();
    let mut t = Term::Var(*ls.last().unwrap());
    for &v in ls.iter().rev().skip(1) {
        t = Term::App(mul, vec![Term::Var(v), t]);
    }
    t
}

/// Both sides of an identity over the band signature, as words.
pub fn flatten_identity(e: &Identity) -> Result<(Word, Word)> {
    let sig = Signature::band();
    Ok((flatten(&e.lhs, &sig)?, flatten(&e.rhs, &sig)?))
}

// ---------------------------------------------------------------------------
// Green–Rees canonical forms

/// Unique representative of a word modulo the band axioms: two words
/// are equal in every band iff their canonical forms coincide.
///
/// For a word with `k ≥ 2` distinct letters the form is
/// `canon(p) a b canon(s)`, where `p` is the longest prefix with `k−1`
/// distinct letters, `a` the letter after it, and `b, s` the mirror
/// decomposition from the right. Both marks are recoverable from the
/// concatenation, which makes the form injective, and every band
/// satisfies `w ≈ p·a·b·s`, so the form stays in the class of `w`.
pub fn band_canonical(w: &Word) -> Word {
    Word(canon(w.letters()))
}

/// Decides `u ≈ v` in the free band, i.e. whether the identity holds
/// in all bands.
pub fn band_equal(u: &Word, v: &Word) -> bool {
    canon(u.letters()) == canon(v.letters())
}

fn canon(w: &[usize]) -> Vec<usize> {
    let k = distinct_count(w);
    if k == 1 {
        return vec![w[0]];
    }
    let (prefix, a) = left_mark(w, k);
    let (b, suffix) = right_mark(w, k);
    let mut out = canon(prefix);
    out.push(a);
    out.push(b);
    out.extend(canon(suffix));
    out
}

fn distinct_count(w: &[usize]) -> usize {
    let mut seen: Vec<usize> = Vec::new();
    for &l in w {
        if !seen.contains(&l) {
            seen.push(l);
        }
    }
    seen.len()
}

/// Longest prefix with `k−1` distinct letters, and the letter after it.
fn left_mark(w: &[usize], k: usize) -> (&[usize], usize) {
    let mut seen: Vec<usize> = Vec::new();
    for (i, &l) in w.iter().enumerate() {
        if !seen.contains(&l) {
            seen.push(l);
            if seen.len() == k {
                return (&w[..i], l);
            }
        }
    }
    unreachable!("scanned past the content of the word")
}

/// Mirror of [`left_mark`]: the letter before the longest suffix with
/// `k−1` distinct letters.
fn right_mark(w: &[usize], k: usize) -> (usize, &[usize]) {
    let mut seen: Vec<usize> = Vec::new();
    for (i, &l) in w.iter().enumerate().rev() {
        if !seen.contains(&l) {
            seen.push(l);
            if seen.len() == k {
                return (l, &w[i + 1..]);
            }
        }
    }
    unreachable!("scanned past the content of the word")
}

// ---------------------------------------------------------------------------
// Free bands and relatively free algebras

/// The free band on `n` generators: canonical-form index, full
/// multiplication table, shortest-lexicographic labels.
struct FreeBandData {
    words: Vec<Word>,
    mult: Vec<usize>,
    size: usize,
}

impl FreeBandData {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.size + b]
    }

    fn build(n: usize) -> FreeBandData {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut forms: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            index.insert(vec![g], forms.len());
            forms.push(vec![g]);
        }
        // close under multiplication
        let mut processed = 0;
        while processed < forms.len() {
            let upto = forms.len();
            for i in 0..upto {
                for j in 0..upto {
                    if i < processed && j < processed {
                        continue;
                    }
                    let mut prod = forms[i].clone();
                    prod.extend_from_slice(&forms[j]);
                    let c = canon(&prod);
                    if !index.contains_key(&c) {
                        index.insert(c.clone(), forms.len());
                        forms.push(c);
                    }
                }
            }
            processed = upto;
        }
        let size = forms.len();
        let mut mult = vec![0usize; size * size];
        for i in 0..size {
            for j in 0..size {
                let mut prod = forms[i].clone();
                prod.extend_from_slice(&forms[j]);
                mult[i * size + j] = index[&canon(&prod)];
            }
        }
        // Shortest-then-lexicographic labels by breadth-first word
        // enumeration; every class contains a shortest word, so this
        // terminates.
        let mut words: Vec<Option<Word>> = vec![None; size];
        let mut found = 0;
        let mut len = 1;
        while found < size {
            for_each_tuple(n, len, |letters| {
                let id = index[&canon(letters)];
                if words[id].is_none() {
                    words[id] = Some(Word(letters.to_vec()));
                    found += 1;
                }
                found < size
            });
            len += 1;
        }
        FreeBandData {
            words: words.into_iter().map(Option::unwrap).collect(),
            mult,
            size,
        }
    }
}

static FREE_BANDS: LazyLock<Mutex<HashMap<usize, &'static FreeBandData>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn free_band_data(n: usize) -> &'static FreeBandData {
    let mut cache = FREE_BANDS.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| Box::leak(Box::new(FreeBandData::build(n))))
}

/// A finite set of band identities; the band axioms themselves are
/// implicit. Stored as word pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandAxioms {
    pairs: Vec<(Word, Word)>,
}

impl BandAxioms {
    /// No extra axioms: the variety of all bands.
    pub fn empty() -> BandAxioms {
        BandAxioms { pairs: Vec::new() }
    }

    pub fn new(identities: &[Identity]) -> Result<BandAxioms> {
        let pairs = identities
            .iter()
            .map(flatten_identity)
            .collect::<Result<_>>()?;
        Ok(BandAxioms { pairs })
    }

    /// Identities in the concrete syntax, e.g. `"zxyz = zyxz"`.
    pub fn parse(texts: &[&str]) -> Result<BandAxioms> {
        let sig = Signature::band();
        let identities = texts
            .iter()
            .map(|t| parse_identity(t, &sig))
            .collect::<Result<Vec<_>>>()?;
        BandAxioms::new(&identities)
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn identities(&self) -> Vec<Identity> {
        self.pairs
            .iter()
            .map(|(u, v)| Identity::new(unflatten(u), unflatten(v)))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A relatively free band `F_V(n)` with its word labels and the
/// congruence on the free band it came from.
pub struct FreeAlgebra {
    /// The quotient algebra, labelled by shortest-lex words.
    pub algebra: FiniteAlgebra,
    /// Element ids of the `n` generators.
    pub generators: Vec<usize>,
    /// Shortest-lex word of each quotient element.
    pub words: Vec<Word>,
    /// Shortest-lex word of each free-band element.
    pub base_words: Vec<Word>,
    /// Free-band element -> quotient element.
    pub base_block: Vec<usize>,
}

impl FreeAlgebra {
    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    /// Multiplication on element ids.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.algebra.op(SymbolId(0), &[a, b])
    }

    /// Evaluates a word under an environment indexed by letter.
    pub fn eval_word(&self, w: &Word, env: &[usize]) -> usize {
        let ls = w.letters();
        let mut acc = env[ls[0]];
        for &l in &ls[1..] {
            acc = self.mul(acc, env[l]);
        }
        acc
    }

    /// The element a word denotes when its letters name generators.
    pub fn element_of_word(&self, w: &Word) -> Result<usize> {
        let n = self.generators.len();
        if let Some(&l) = w.letters().iter().find(|&&l| l >= n) {
            return Err(Error::UnboundVariable(var_name(l)));
        }
        Ok(self.eval_word(w, &self.generators))
    }
}

/// Builds `F_V(n)`: the free band on `n` generators modulo the
/// congruence generated by every element instance of every axiom
/// (variables of an axiom range over all elements, so axioms may use
/// more variables than there are generators). With no axioms this is
/// the free band itself.
pub fn free_algebra(axioms: &BandAxioms, n: usize, cap: usize) -> Result<FreeAlgebra> {
    if n == 0 || n > cap {
        return Err(Error::CapExceeded {
            what: "free-algebra generators",
            requested: n,
            cap,
        });
    }
    // The free band on four generators has 332,380 elements; its
    // multiplication table does not fit desk scale regardless of cap.
    if n > DEFAULT_GENERATOR_CAP {
        return Err(Error::CapExceeded {
            what: "free-band generators (the free band on four generators already has 332,380 elements)",
            requested: n,
            cap: DEFAULT_GENERATOR_CAP,
        });
    }
    let fb = free_band_data(n);
    let sig = Signature::band();
    let fb_algebra = FiniteAlgebra::new(sig, fb.size, vec![fb.mult.clone()])?
        .with_labels(fb.words.iter().map(Word::to_string).collect())?;

    let mut builder = CongruenceBuilder::new(&fb_algebra);
    for (u, v) in &axioms.pairs {
        let letters = distinct_letters(u, v);
        let lu = relabel(u, &letters);
        let lv = relabel(v, &letters);
        for_each_tuple(fb.size, letters.len(), |env| {
            builder.merge(eval_letters(fb, &lu, env), eval_letters(fb, &lv, env));
            true
        });
    }
    let partition = builder.finish();

    let blocks = partition.num_blocks();
    let mut words: Vec<Option<&Word>> = vec![None; blocks];
    for (e, w) in fb.words.iter().enumerate() {
        let b = partition.block_of(e);
        if words[b].is_none_or(|cur| word_shorter_lex(w, cur)) {
            words[b] = Some(w);
        }
    }
    let words: Vec<Word> = words.into_iter().map(|w| w.unwrap().clone()).collect();

    let quotient = fb_algebra
        .quotient(&partition)?
        .with_labels(words.iter().map(Word::to_string).collect())?;
    Ok(FreeAlgebra {
        algebra: quotient,
        generators: (0..n).map(|g| partition.block_of(g)).collect(),
        words,
        base_words: fb.words.clone(),
        base_block: (0..fb.size).map(|e| partition.block_of(e)).collect(),
    })
}

/// The free band on `n` generators.
pub fn free_band(n: usize, cap: usize) -> Result<FreeAlgebra> {
    free_algebra(&BandAxioms::empty(), n, cap)
}

fn word_shorter_lex(a: &Word, b: &Word) -> bool {
    (a.len(), a.letters()) < (b.len(), b.letters())
}

fn distinct_letters(u: &Word, v: &Word) -> Vec<usize> {
    let mut letters = u.first_occurrences();
    for l in v.first_occurrences() {
        if !letters.contains(&l) {
            letters.push(l);
        }
    }
    letters
}

fn relabel(w: &Word, letters: &[usize]) -> Vec<usize> {
    w.letters()
        .iter()
        .map(|l| letters.iter().position(|m| m == l).unwrap())
        .collect()
}

fn eval_letters(fb: &FreeBandData, word: &[usize], env: &[usize]) -> usize {
    let mut acc = env[word[0]];
    for &l in &word[1..] {
        acc = fb.mul(acc, env[l]);
    }
    acc
}

// ---------------------------------------------------------------------------
// The identity oracle

/// A falsifying environment for [`holds_with_witness`]: variables
/// bound to labelled elements of the relatively free algebra, and the
/// two differing values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoldsFailure {
    pub env: Vec<(usize, Word)>,
    pub lhs_value: Word,
    pub rhs_value: Word,
}

/// Does the identity hold in `Mod(band axioms + axioms)`?
///
/// Decided in the relatively free algebra on the identity's variables:
/// the identity holds in the variety iff both sides evaluate equally
/// under the generator assignment, which is the universal environment
/// — when it separates nothing, no environment in any member algebra
/// does.
pub fn holds(axioms: &BandAxioms, e: &Identity, cap: usize) -> Result<bool> {
    Ok(holds_with_witness(axioms, e, cap)?.is_none())
}

pub fn holds_with_witness(
    axioms: &BandAxioms,
    e: &Identity,
    cap: usize,
) -> Result<Option<HoldsFailure>> {
    let (u, v) = flatten_identity(e)?;
    holds_words(axioms, &u, &v, cap)
}

pub fn holds_words(
    axioms: &BandAxioms,
    u: &Word,
    v: &Word,
    cap: usize,
) -> Result<Option<HoldsFailure>> {
    let k = identity_letters(u, v).len();
    if k > cap {
        return Err(Error::CapExceeded {
            what: "identity variables",
            requested: k,
            cap,
        });
    }
    let free = free_algebra(axioms, k, cap)?;
    decide_in_free(&free, u, v)
}

/// The distinct letters of an identity, left side first, in order of
/// first occurrence.
pub fn identity_letters(u: &Word, v: &Word) -> Vec<usize> {
    distinct_letters(u, v)
}

/// Decides `u ≈ v` against a prebuilt relatively free algebra on at
/// least as many generators as the identity has distinct letters.
pub fn decide_in_free(free: &FreeAlgebra, u: &Word, v: &Word) -> Result<Option<HoldsFailure>> {
    let letters = distinct_letters(u, v);
    if letters.len() > free.generators.len() {
        return Err(Error::CapExceeded {
            what: "identity variables",
            requested: letters.len(),
            cap: free.generators.len(),
        });
    }
    let lu = Word(relabel(u, &letters));
    let lv = Word(relabel(v, &letters));
    let a = free.element_of_word(&lu)?;
    let b = free.element_of_word(&lv)?;
    if a == b {
        return Ok(None);
    }
    Ok(Some(HoldsFailure {
        env: letters
            .iter()
            .zip(&free.generators)
            .map(|(&var, &g)| (var, free.words[g].clone()))
            .collect(),
        lhs_value: free.words[a].clone(),
        rhs_value: free.words[b].clone(),
    }))
}

// ---------------------------------------------------------------------------
// Fast canonical keys

/// The band varieties with dedicated canonical keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FastVariety {
    Lz,
    Rz,
    Rb,
    Sl,
    V1,
    V2,
    V3,
    V4,
    Nb,
    RegB,
}

impl FastVariety {
    pub const ALL: [FastVariety; 10] = [
        FastVariety::Lz,
        FastVariety::Rz,
        FastVariety::Rb,
        FastVariety::Sl,
        FastVariety::V1,
        FastVariety::V2,
        FastVariety::V3,
        FastVariety::V4,
        FastVariety::Nb,
        FastVariety::RegB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FastVariety::Lz => "LZ",
            FastVariety::Rz => "RZ",
            FastVariety::Rb => "RB",
            FastVariety::Sl => "SL",
            FastVariety::V1 => "V1",
            FastVariety::V2 => "V2",
            FastVariety::V3 => "V3",
            FastVariety::V4 => "V4",
            FastVariety::Nb => "NB",
            FastVariety::RegB => "RegB",
        }
    }

    pub fn from_name(name: &str) -> Option<FastVariety> {
        FastVariety::ALL.into_iter().find(|v| v.name() == name)
    }
}

/// Canonical key of a word in one of the fast-path varieties; two
/// words get equal keys iff they are equal in the variety. Each key
/// shape is validated exhaustively against the free-quotient decision
/// in the test suite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FastKey {
    pub variety: FastVariety,
    parts: KeyParts,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum KeyParts {
    Letter(usize),
    Pair(usize, usize),
    Content(Vec<usize>),
    LetterContent(usize, Vec<usize>),
    Seq(Vec<usize>),
    Triple(usize, Vec<usize>, usize),
    SeqPair(Vec<usize>, Vec<usize>),
}

/// Computes the per-variety canonical key:
///
/// * `LZ` first letter; `RZ` last letter; `RB` both.
/// * `SL` content set.
/// * `V1` first letter plus the remaining content; `V2` the mirror.
/// * `V3` sequence of first occurrences; `V4` the mirror.
/// * `NB` (first, content, last).
/// * `RegB` (first occurrences, last occurrences).
pub fn fast_normalize(variety: FastVariety, w: &Word) -> FastKey {
    use FastVariety::*;
    let parts = match variety {
        Lz => KeyParts::Letter(w.first()),
        Rz => KeyParts::Letter(w.last()),
        Rb => KeyParts::Pair(w.first(), w.last()),
        Sl => KeyParts::Content(w.content()),
        V1 => {
            let first = w.first();
            let rest = w.content().into_iter().filter(|&l| l != first).collect();
            KeyParts::LetterContent(first, rest)
        }
        V2 => {
            let last = w.last();
            let rest = w.content().into_iter().filter(|&l| l != last).collect();
            KeyParts::LetterContent(last, rest)
        }
        V3 => KeyParts::Seq(w.first_occurrences()),
        V4 => KeyParts::Seq(w.last_occurrences()),
        Nb => KeyParts::Triple(w.first(), w.content(), w.last()),
        RegB => KeyParts::SeqPair(w.first_occurrences(), w.last_occurrences()),
    };
    FastKey { variety, parts }
}

impl fmt::Display for FastKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn seq(ls: &[usize]) -> String {
            ls.iter().map(|&l| var_name(l)).collect()
        }
        fn set(ls: &[usize]) -> String {
            let inner: Vec<String> = ls.iter().map(|&l| var_name(l)).collect();
            format!("{{{}}}", inner.join(","))
        }
        write!(f, "{}:", self.variety.name())?;
        match &self.parts {
            KeyParts::Letter(l) => write!(f, "{}", var_name(*l)),
            KeyParts::Pair(a, b) => write!(f, "({},{})", var_name(*a), var_name(*b)),
            KeyParts::Content(c) => write!(f, "{}", set(c)),
            KeyParts::LetterContent(l, c) => write!(f, "({},{})", var_name(*l), set(c)),
            KeyParts::Seq(s) => write!(f, "{}", seq(s)),
            KeyParts::Triple(a, c, b) => {
                write!(f, "({},{},{})", var_name(*a), set(c), var_name(*b))
            }
            KeyParts::SeqPair(s, t) => write!(f, "({},{})", seq(s), seq(t)),
        }
    }
}
