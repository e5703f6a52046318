//! Finite algebras as operation tables: term evaluation, exhaustive
//! identity checking, derived algebras, congruence generation,
//! quotients, and small-scale isomorphism search.

use crate::hypersub::Hypersubstitution;
use crate::term::{var_name, Identity, Signature, SymbolId, Term};
use crate::{Error, Result};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// Default cap for the backtracking isomorphism search.
pub const DEFAULT_ISO_CAP: usize = 64;

/// An algebra on carrier `0..size` with one total operation table per
/// symbol of its signature. Tables are row-major: the entry for
/// arguments `(a, b)` of a binary symbol sits at `a * size + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl FiniteAlgebra {
    pub fn new(sig: Signature, size: usize, tables: Vec<Vec<usize>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::BadTable {
                op: String::new(),
                msg: "carrier must be nonempty".into(),
            });
        }
        if tables.len() != sig.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} tables for {} symbols",
                tables.len(),
                sig.len()
            )));
        }
        for ((_, sym), table) in sig.symbols().zip(&tables) {
            let expect = size.pow(sym.arity as u32);
            if table.len() != expect {
                return Err(Error::BadTable {
                    op: sym.name.clone(),
                    msg: format!("expected {expect} entries, got {}", table.len()),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= size) {
                return Err(Error::BadTable {
                    op: sym.name.clone(),
                    msg: format!("entry {bad} outside carrier 0..{size}"),
                });
            }
        }
        Ok(FiniteAlgebra {
            sig,
            size,
            tables,
            labels: None,
        })
    }

    /// Builds each table by calling `f` on every argument tuple.
    pub fn from_fn(
        sig: Signature,
        size: usize,
        mut f: impl FnMut(SymbolId, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = Vec::new();
        for (id, sym) in sig.symbols() {
            let mut table = Vec::with_capacity(size.pow(sym.arity as u32));
            for_each_tuple(size, sym.arity, |tuple| {
                table.push(f(id, tuple));
                true
            });
            tables.push(table);
        }
        FiniteAlgebra::new(sig, size, tables)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::BadTable {
                op: String::new(),
                msg: format!("{} labels for {} elements", labels.len(), self.size),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, e: usize) -> String {
        match &self.labels {
            Some(ls) => ls[e].clone(),
            None => e.to_string(),
        }
    }

    /// Raw table lookup.
    pub fn op(&self, id: SymbolId, args: &[usize]) -> usize {
        let table = &self.tables[id.0];
        debug_assert_eq!(args.len(), self.sig.symbol(id).arity);
        let mut idx = 0;
        for &a in args {
            debug_assert!(a < self.size);
            idx = idx * self.size + a;
        }
        table[idx]
    }

    pub fn table(&self, id: SymbolId) -> &[usize] {
        &self.tables[id.0]
    }

    /// Evaluates a term under an environment for its variables.
    pub fn evaluate(&self, t: &Term, env: &BTreeMap<usize, usize>) -> Result<usize> {
        t.check_signature(&self.sig)?;
        self.eval_unchecked(t, env)
    }

    fn eval_unchecked(&self, t: &Term, env: &BTreeMap<usize, usize>) -> Result<usize> {
        match t {
            Term::Var(v) => env
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnboundVariable(var_name(*v))),
            Term::App(id, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval_unchecked(a, env)?);
                }
                Ok(self.op(*id, &vals))
            }
        }
    }

    /// Exhaustively checks an identity over all environments, with an
    /// early exit. The witness is the first falsifying environment in
    /// lexicographic order, as `(variable, element)` pairs.
    pub fn satisfies_with_witness(&self, e: &Identity) -> Option<Vec<(usize, usize)>> {
        let vars = e.variables();
        let lhs = compile(&e.lhs, &vars);
        let rhs = compile(&e.rhs, &vars);
        let mut witness = None;
        for_each_tuple(self.size, vars.len(), |env| {
            if self.eval_compiled(&lhs, env) != self.eval_compiled(&rhs, env) {
                witness = Some(vars.iter().copied().zip(env.iter().copied()).collect());
                false
            } else {
                true
            }
        });
        witness
    }

    pub fn satisfies(&self, e: &Identity) -> bool {
        self.satisfies_with_witness(e).is_none()
    }

    fn eval_compiled(&self, t: &Term, env: &[usize]) -> usize {
        match t {
            Term::Var(p) => env[*p],
            Term::App(id, args) => {
                let table = &self.tables[id.0];
                let mut idx = 0;
                for a in args {
                    idx = idx * self.size + self.eval_compiled(a, env);
                }
                table[idx]
            }
        }
    }

    /// Same carrier, with each fundamental operation replaced by the
    /// term operation of its image under the hypersubstitution.
    pub fn derived_algebra(&self, s: &Hypersubstitution) -> Result<FiniteAlgebra> {
        if s.signature() != &self.sig {
            return Err(Error::SignatureMismatch(
                "hypersubstitution is over a different signature".into(),
            ));
        }
        let mut tables = Vec::new();
        for (id, sym) in self.sig.symbols() {
            let image = compile(s.image(id), &(0..sym.arity).collect::<Vec<_>>());
            let mut table = Vec::with_capacity(self.size.pow(sym.arity as u32));
            for_each_tuple(self.size, sym.arity, |tuple| {
                table.push(self.eval_compiled(&image, tuple));
                true
            });
            tables.push(table);
        }
        Ok(FiniteAlgebra {
            sig: self.sig.clone(),
            size: self.size,
            tables,
            labels: self.labels.clone(),
        })
    }

    /// Least congruence containing `pairs`: disjoint-set closure with a
    /// worklist, re-propagating each merge through every unary
    /// polynomial translation (one argument slot varies, the rest
    /// fixed).
    pub fn congruence_generated(&self, pairs: &[(usize, usize)]) -> Partition {
        let mut builder = CongruenceBuilder::new(self);
        for &(a, b) in pairs {
            builder.merge(a, b);
        }
        builder.finish()
    }

    /// Checks compatibility of a partition with every operation.
    pub fn is_congruence(&self, p: &Partition) -> Result<()> {
        if p.len() != self.size {
            return Err(Error::NotACongruence {
                op: String::new(),
                a: p.len(),
                b: self.size,
            });
        }
        let reps = p.representatives();
        for (id, sym) in self.sig.symbols() {
            let mut bad = None;
            for_each_tuple(self.size, sym.arity, |tuple| {
                let direct = self.op(id, tuple);
                let via_reps: Vec<usize> = tuple.iter().map(|&e| reps[p.block_of(e)]).collect();
                let through = self.op(id, &via_reps);
                if p.block_of(direct) != p.block_of(through) {
                    bad = Some((direct, through));
                    false
                } else {
                    true
                }
            });
            if let Some((a, b)) = bad {
                return Err(Error::NotACongruence {
                    op: sym.name.clone(),
                    a,
                    b,
                });
            }
        }
        Ok(())
    }

    /// Quotient by a congruence. Block labels are the
    /// shortest-then-lexicographic label among the members.
    pub fn quotient(&self, p: &Partition) -> Result<FiniteAlgebra> {
        self.is_congruence(p)?;
        let reps = p.representatives();
        let blocks = p.num_blocks();
        let mut tables = Vec::new();
        for (id, sym) in self.sig.symbols() {
            let mut table = Vec::with_capacity(blocks.pow(sym.arity as u32));
            for_each_tuple(blocks, sym.arity, |tuple| {
                let args: Vec<usize> = tuple.iter().map(|&b| reps[b]).collect();
                table.push(p.block_of(self.op(id, &args)));
                true
            });
            tables.push(table);
        }
        let labels = self.labels.as_ref().map(|ls| {
            let mut best: Vec<Option<&String>> = vec![None; blocks];
            for (e, l) in ls.iter().enumerate() {
                let b = p.block_of(e);
                if best[b].is_none_or(|cur| shorter_lex(l, cur)) {
                    best[b] = Some(l);
                }
            }
            best.into_iter().map(|l| l.unwrap().clone()).collect()
        });
        Ok(FiniteAlgebra {
            sig: self.sig.clone(),
            size: blocks,
            tables,
            labels,
        })
    }

    /// Searches for a bijection carrying tables to tables, by
    /// backtracking with local-invariant pruning.
    pub fn isomorphic(&self, other: &FiniteAlgebra) -> Result<Option<Vec<usize>>> {
        self.isomorphic_capped(other, DEFAULT_ISO_CAP)
    }

    pub fn isomorphic_capped(
        &self,
        other: &FiniteAlgebra,
        cap: usize,
    ) -> Result<Option<Vec<usize>>> {
        let n = self.size.max(other.size);
        if n > cap {
            return Err(Error::CapExceeded {
                what: "isomorphism search size",
                requested: n,
                cap,
            });
        }
        if self.sig != other.sig || self.size != other.size {
            return Ok(None);
        }
        let fp_a: Vec<_> = (0..self.size).map(|e| self.fingerprint(e)).collect();
        let fp_b: Vec<_> = (0..other.size).map(|e| other.fingerprint(e)).collect();
        {
            let mut sa = fp_a.clone();
            let mut sb = fp_b.clone();
            sa.sort_unstable();
            sb.sort_unstable();
            if sa != sb {
                return Ok(None);
            }
        }
        let mut map = vec![usize::MAX; self.size];
        let mut used = vec![false; self.size];
        if self.extend_iso(other, &fp_a, &fp_b, &mut map, &mut used, 0) {
            Ok(Some(map))
        } else {
            Ok(None)
        }
    }

    fn extend_iso(
        &self,
        other: &FiniteAlgebra,
        fp_a: &[Vec<usize>],
        fp_b: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        if next == self.size {
            return true;
        }
        for candidate in 0..self.size {
            if used[candidate] || fp_a[next] != fp_b[candidate] {
                continue;
            }
            map[next] = candidate;
            used[candidate] = true;
            if self.consistent_so_far(other, map, next)
                && self.extend_iso(other, fp_a, fp_b, map, used, next + 1)
            {
                return true;
            }
            map[next] = usize::MAX;
            used[candidate] = false;
        }
        false
    }

    /// Checks every tuple of assigned elements whose operation value is
    /// also assigned; with all elements 0..=k assigned this still
    /// amounts to the full table check at the last level.
    fn consistent_so_far(&self, other: &FiniteAlgebra, map: &[usize], upto: usize) -> bool {
        let assigned = |e: usize| e <= upto;
        for (id, sym) in self.sig.symbols() {
            let mut ok = true;
            for_each_tuple(upto + 1, sym.arity, |tuple| {
                let v = self.op(id, tuple);
                if assigned(v) {
                    let mapped: Vec<usize> = tuple.iter().map(|&e| map[e]).collect();
                    if other.op(id, &mapped) != map[v] {
                        ok = false;
                        return false;
                    }
                }
                true
            });
            if !ok {
                return false;
            }
        }
        true
    }

    fn fingerprint(&self, e: usize) -> Vec<usize> {
        let mut fp = Vec::new();
        for (id, sym) in self.sig.symbols() {
            match sym.arity {
                1 => {
                    fp.push((self.op(id, &[e]) == e) as usize);
                }
                2 => {
                    fp.push((self.op(id, &[e, e]) == e) as usize);
                    let mut left_fix = 0;
                    let mut right_fix = 0;
                    let mut left_abs = 0;
                    let mut right_abs = 0;
                    for x in 0..self.size {
                        left_fix += (self.op(id, &[e, x]) == x) as usize;
                        right_fix += (self.op(id, &[x, e]) == x) as usize;
                        left_abs += (self.op(id, &[e, x]) == e) as usize;
                        right_abs += (self.op(id, &[x, e]) == e) as usize;
                    }
                    fp.extend([left_fix, right_fix, left_abs, right_abs]);
                }
                _ => {}
            }
        }
        fp
    }

    /// Serializes to the JSON algebra format
    /// `{"size": n, "ops": {"mul": [[...]]}}` with row-major tables and
    /// optional `labels`.
    pub fn to_json(&self) -> Value {
        let mut ops = Map::new();
        for (id, sym) in self.sig.symbols() {
            ops.insert(
                sym.name.clone(),
                nest_table(&self.tables[id.0], self.size, sym.arity),
            );
        }
        let mut root = json!({ "size": self.size, "ops": Value::Object(ops) });
        if let Some(labels) = &self.labels {
            root["labels"] = json!(labels);
        }
        root
    }

    /// Parses the JSON algebra format. Symbols are ordered
    /// alphabetically; arity is inferred from table nesting depth.
    pub fn from_json(text: &str) -> Result<FiniteAlgebra> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::AlgebraFormat(e.to_string()))?;
        let size = v["size"]
            .as_u64()
            .ok_or_else(|| Error::AlgebraFormat("missing numeric `size`".into()))?
            as usize;
        let ops = v["ops"]
            .as_object()
            .ok_or_else(|| Error::AlgebraFormat("missing `ops` object".into()))?;
        let mut names: Vec<&String> = ops.keys().collect();
        names.sort();
        let mut symbols = Vec::new();
        let mut tables = Vec::new();
        for name in names {
            let mut flat = Vec::new();
            let arity = flatten_table(&ops[name], size, name, 0, &mut flat)?;
            symbols.push((name.clone(), arity));
            tables.push(flat);
        }
        let mut sig = Signature::new(symbols)?;
        if sig == Signature::lattice() {
            // adopt the infix presentation for join/meet
            sig = Signature::lattice();
        }
        let mut alg = FiniteAlgebra::new(sig, size, tables)?;
        if let Some(ls) = v.get("labels") {
            let labels: Vec<String> = ls
                .as_array()
                .ok_or_else(|| Error::AlgebraFormat("`labels` must be an array".into()))?
                .iter()
                .map(|l| {
                    l.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::AlgebraFormat("labels must be strings".into()))
                })
                .collect::<Result<_>>()?;
            alg = alg.with_labels(labels)?;
        }
        Ok(alg)
    }
}

/// `a` strictly precedes `b` in shortest-then-lexicographic order.
pub(crate) fn shorter_lex(a: &str, b: &str) -> bool {
    (a.len(), a) < (b.len(), b)
}

fn nest_table(flat: &[usize], size: usize, arity: usize) -> Value {
    if arity == 0 {
        return json!(flat[0]);
    }
    let chunk = flat.len() / size;
    if arity == 1 {
        return json!(flat);
    }
    Value::Array(
        flat.chunks(chunk)
            .map(|c| nest_table(c, size, arity - 1))
            .collect(),
    )
}

fn flatten_table(
    v: &Value,
    size: usize,
    op: &str,
    depth: usize,
    out: &mut Vec<usize>,
) -> Result<usize> {
    match v {
        Value::Number(n) => {
            let e = n
                .as_u64()
                .ok_or_else(|| Error::AlgebraFormat(format!("bad entry in `{op}`")))?;
            out.push(e as usize);
            Ok(depth)
        }
        Value::Array(items) => {
            if items.len() != size {
                return Err(Error::AlgebraFormat(format!(
                    "table for `{op}` has a row of length {} (size is {size})",
                    items.len()
                )));
            }
            let mut arity = None;
            for item in items {
                let a = flatten_table(item, size, op, depth + 1, out)?;
                if *arity.get_or_insert(a) != a {
                    return Err(Error::AlgebraFormat(format!(
                        "ragged table nesting for `{op}`"
                    )));
                }
            }
            Ok(arity.unwrap_or(depth + 1))
        }
        _ => Err(Error::AlgebraFormat(format!(
            "table for `{op}` must nest arrays of numbers"
        ))),
    }
}

/// Renumbers the variables of a term to their positions in `vars`, so
/// evaluation can use a flat environment slice.
fn compile(t: &Term, vars: &[usize]) -> Term {
    match t {
        Term::Var(v) => Term::Var(vars.iter().position(|w| w == v).expect("variable listed")),
        Term::App(id, args) => Term::App(*id, args.iter().map(|a| compile(a, vars)).collect()),
    }
}

/// Calls `f` on every tuple in `0..size`^`arity` in lexicographic
/// order; stops early when `f` returns false.
pub(crate) fn for_each_tuple(size: usize, arity: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut tuple = vec![0usize; arity];
    if arity == 0 {
        f(&tuple);
        return;
    }
    if size == 0 {
        return;
    }
    loop {
        if !f(&tuple) {
            return;
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < size {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// A partition of `0..len` into blocks, numbered by first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    num_blocks: usize,
}

impl Partition {
    /// Builds from a block assignment, renumbering canonically.
    pub fn from_assignment(raw: &[usize]) -> Partition {
        let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
        let mut block_of = Vec::with_capacity(raw.len());
        let mut next = 0;
        for &r in raw {
            let b = *renumber.entry(r).or_insert_with(|| {
                let b = next;
                next += 1;
                b
            });
            block_of.push(b);
        }
        Partition {
            block_of,
            num_blocks: next,
        }
    }

    pub fn identity(len: usize) -> Partition {
        Partition {
            block_of: (0..len).collect(),
            num_blocks: len,
        }
    }

    pub fn single_block(len: usize) -> Partition {
        Partition {
            block_of: vec![0; len],
            num_blocks: if len == 0 { 0 } else { 1 },
        }
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.block_of[e]
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// First element of each block.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.num_blocks];
        for (e, &b) in self.block_of.iter().enumerate() {
            if reps[b] == usize::MAX {
                reps[b] = e;
            }
        }
        reps
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks];
        for (e, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(e);
        }
        blocks
    }

    /// Refinement order: every block of `self` lies inside a block of
    /// `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image: Vec<Option<usize>> = vec![None; self.num_blocks];
        for e in 0..self.len() {
            let b = self.block_of[e];
            match image[b] {
                None => image[b] = Some(other.block_of[e]),
                Some(o) if o == other.block_of[e] => {}
                _ => return false,
            }
        }
        true
    }
}

/// Incremental congruence closure over an algebra: feed generating
/// pairs with [`merge`](CongruenceBuilder::merge), take the least
/// congruence containing them with
/// [`finish`](CongruenceBuilder::finish). Suited to streaming large
/// instance sets without materializing them.
pub struct CongruenceBuilder<'a> {
    alg: &'a FiniteAlgebra,
    dsu: Dsu,
    work: Vec<(usize, usize)>,
}

impl<'a> CongruenceBuilder<'a> {
    pub fn new(alg: &'a FiniteAlgebra) -> Self {
        CongruenceBuilder {
            alg,
            dsu: Dsu::new(alg.size),
            work: Vec::new(),
        }
    }

    pub fn merge(&mut self, a: usize, b: usize) {
        self.work.push((a, b));
        while let Some((a, b)) = self.work.pop() {
            if !self.dsu.union(a, b) {
                continue;
            }
            let size = self.alg.size;
            for (id, sym) in self.alg.sig.symbols() {
                match sym.arity {
                    0 => {}
                    2 => {
                        let table = &self.alg.tables[id.0];
                        for c in 0..size {
                            self.work.push((table[c * size + a], table[c * size + b]));
                            self.work.push((table[a * size + c], table[b * size + c]));
                        }
                    }
                    arity => {
                        for slot in 0..arity {
                            let alg = self.alg;
                            let work = &mut self.work;
                            for_each_tuple(size, arity - 1, |ctx| {
                                let mut ta = Vec::with_capacity(arity);
                                ta.extend_from_slice(&ctx[..slot]);
                                ta.push(a);
                                ta.extend_from_slice(&ctx[slot..]);
                                let mut tb = ta.clone();
                                tb[slot] = b;
                                work.push((alg.op(id, &ta), alg.op(id, &tb)));
                                true
                            });
                        }
                    }
                }
            }
        }
    }

    /// Are the two elements already identified?
    pub fn joined(&mut self, a: usize, b: usize) -> bool {
        self.dsu.find(a) == self.dsu.find(b)
    }

    pub fn finish(self) -> Partition {
        self.dsu.into_partition()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_partition(mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|e| self.find(e)).collect();
        Partition::from_assignment(&roots)
    }
}
