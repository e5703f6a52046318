//! Helpers shared by the integration suites: brute-force band
//! enumeration and word generation.

use vardim::algebra::FiniteAlgebra;
use vardim::band::Word;
use vardim::term::Signature;

/// All idempotent associative multiplication tables on `0..n`, by
/// brute force over the off-diagonal cells.
pub fn labeled_bands(n: usize) -> Vec<FiniteAlgebra> {
    let sig = Signature::band();
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let mut table = vec![0usize; n * n];
    for i in 0..n {
        table[i * n + i] = i;
    }
    let mut found = Vec::new();
    let mut picks = vec![0usize; cells.len()];
    loop {
        for (k, &(i, j)) in cells.iter().enumerate() {
            table[i * n + j] = picks[k];
        }
        if associative(&table, n) {
            found.push(FiniteAlgebra::new(sig.clone(), n, vec![table.clone()]).unwrap());
        }
        let mut k = cells.len();
        loop {
            if k == 0 {
                return found;
            }
            k -= 1;
            picks[k] += 1;
            if picks[k] < n {
                break;
            }
            picks[k] = 0;
        }
    }
}

fn associative(table: &[usize], n: usize) -> bool {
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a * n + b] * n + c] != table[a * n + table[b * n + c]] {
                    return false;
                }
            }
        }
    }
    true
}

/// One representative per isomorphism class of bands with `1..=max`
/// elements.
pub fn bands_up_to_iso(max: usize) -> Vec<FiniteAlgebra> {
    let mut reps: Vec<FiniteAlgebra> = Vec::new();
    for n in 1..=max {
        for band in labeled_bands(n) {
            if !reps
                .iter()
                .filter(|r| r.size() == n)
                .any(|r| r.isomorphic(&band).unwrap().is_some())
            {
                reps.push(band);
            }
        }
    }
    reps
}

/// All words over the first `letters` letters with lengths
/// `1..=max_len`, in length-lexicographic order.
pub fn words_over(letters: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &current {
            for l in 0..letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(|v| Word::new(v).unwrap()));
        current = next;
    }
    out
}
