//! Subshifts of finite type and the diagonal shadowing construction.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{agreement_for, SymSeq, SymbolicError};
use crate::scalar::Scalar;

/// Sequences over `0..alphabet` in which no forbidden word appears.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftSpec {
    alphabet: u8,
    forbidden: Vec<Vec<u8>>,
}

impl SftSpec {
    pub fn new(alphabet: u8, forbidden: Vec<Vec<u8>>) -> Result<Self, SymbolicError> {
        if alphabet == 0 || alphabet > 10 {
            return Err(SymbolicError::Invalid(format!("alphabet size {alphabet} outside 1..=10")));
        }
        for w in &forbidden {
            if w.is_empty() || w.iter().any(|&s| s >= alphabet) {
                return Err(SymbolicError::Invalid(format!("bad forbidden word {w:?}")));
            }
        }
        Ok(SftSpec { alphabet, forbidden })
    }

    pub fn full(alphabet: u8) -> Self {
        SftSpec { alphabet, forbidden: Vec::new() }
    }

    /// `X_k`: binary sequences with no `1 0^l 1` for `l <= k`.
    pub fn ladder(k: usize) -> Self {
        let forbidden = (0..=k)
            .map(|l| {
                let mut w = vec![1];
                w.extend(std::iter::repeat_n(0, l));
                w.push(1);
                w
            })
            .collect();
        SftSpec { alphabet: 2, forbidden }
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn forbidden(&self) -> &[Vec<u8>] {
        &self.forbidden
    }

    /// Longest forbidden word length minus one.
    pub fn memory(&self) -> usize {
        self.forbidden.iter().map(Vec::len).max().unwrap_or(1) - 1
    }

    fn occurs_at(&self, w: &[u8], at: impl Fn(usize) -> u8, start: usize) -> bool {
        w.iter().enumerate().all(|(j, &s)| at(start + j) == s)
    }

    pub fn word_allowed(&self, w: &[u8]) -> bool {
        w.iter().all(|&s| s < self.alphabet)
            && self
                .forbidden
                .iter()
                .all(|f| f.len() > w.len() || !(0..=w.len() - f.len()).any(|i| self.occurs_at(f, |j| w[j], i)))
    }

    /// Windows starting past `prefix + period` repeat earlier ones, so the scan is finite.
    pub fn contains(&self, x: &SymSeq) -> bool {
        if x.max_symbol() >= self.alphabet {
            return false;
        }
        let starts = x.prefix().len() + x.period();
        self.forbidden.iter().all(|f| !(0..starts).any(|i| self.occurs_at(f, |j| x.at(j), i)))
    }

    /// Allowed words of length `memory` from which an infinite forward path exists.
    fn alive_nodes(&self) -> HashSet<Vec<u8>> {
        let m = self.memory();
        let mut nodes: HashSet<Vec<u8>> = HashSet::new();
        let mut stack = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            if w.len() == m {
                nodes.insert(w);
                continue;
            }
            for s in 0..self.alphabet {
                let mut v = w.clone();
                v.push(s);
                if self.word_allowed(&v) {
                    stack.push(v);
                }
            }
        }
        loop {
            let dead: Vec<Vec<u8>> =
                nodes.iter().filter(|n| self.successors_in(n, &nodes).is_empty()).cloned().collect();
            if dead.is_empty() {
                return nodes;
            }
            for d in dead {
                nodes.remove(&d);
            }
        }
    }

    fn successors_in(&self, node: &[u8], alive: &HashSet<Vec<u8>>) -> Vec<u8> {
        (0..self.alphabet)
            .filter(|&s| {
                let mut w = node.to_vec();
                w.push(s);
                self.word_allowed(&w) && alive.contains(&w[1..])
            })
            .collect()
    }

    /// Whether the space has any point at all.
    pub fn is_nonempty(&self) -> bool {
        !self.alive_nodes().is_empty()
    }
}

impl fmt::Display for SftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms: Vec<String> = (0..self.alphabet).map(|s| s.to_string()).collect();
        writeln!(f, "alphabet: {}", syms.join(" "))?;
        let words: Vec<String> =
            self.forbidden.iter().map(|w| w.iter().map(|s| s.to_string()).collect::<String>()).collect();
        writeln!(f, "forbidden: {}", words.join(" "))
    }
}

impl FromStr for SftSpec {
    type Err = SymbolicError;

    /// `alphabet: 0 1` then `forbidden: 11 101`, one key per line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| SymbolicError::Parse(m.to_string());
        let mut alphabet = None;
        let mut forbidden = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line.split_once(':').ok_or_else(|| bad(line))?;
            match k.trim() {
                "alphabet" => {
                    let syms = super::digits(&v.split_whitespace().collect::<String>())?;
                    if syms.iter().enumerate().any(|(i, &s)| s as usize != i) {
                        return Err(bad("alphabet must be 0 1 ... n-1"));
                    }
                    alphabet = Some(syms.len() as u8);
                }
                "forbidden" => {
                    for w in v.split_whitespace() {
                        forbidden.push(super::digits(w)?);
                    }
                }
                _ => return Err(bad(line)),
            }
        }
        SftSpec::new(alphabet.ok_or_else(|| bad("missing alphabet"))?, forbidden)
    }
}

/// `min(ε, 2^{-(m+1)})/2` for memory `m`.
pub fn walters_delta(s: &SftSpec, eps: &Scalar) -> Scalar {
    let cap = Scalar::pow2(-(s.memory() as i64 + 1));
    let e = if eps.certainly_le(&cap) { eps.clone() } else { cap };
    &e * &Scalar::ratio(1, 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaltersCertificate {
    pub z: SymSeq,
    /// `max_i d(σ^i z, ξ_i)`, checked to be at most `delta`.
    pub max_dist: Scalar,
    pub delta: Scalar,
}

/// Reads the diagonal `(ξ_0)_0 (ξ_1)_0 ... (ξ_{n-1})_0` followed by `ξ_n`.
pub fn walters_shadow(s: &SftSpec, po: &[SymSeq], delta: &Scalar) -> Result<WaltersCertificate, SymbolicError> {
    let last = po.last().ok_or_else(|| SymbolicError::Invalid("empty pseudo-orbit".into()))?;
    if let Some(bad) = po.iter().find(|x| !s.contains(x)) {
        return Err(SymbolicError::NotInSpace(bad.to_string()));
    }
    if !delta.certainly_le(&Scalar::pow2(-(s.memory() as i64 + 1))) {
        return Err(SymbolicError::Invalid(format!("delta {delta} above 2^-(m+1) for memory {}", s.memory())));
    }
    for i in 0..po.len() - 1 {
        if !po[i].shift().dist(&po[i + 1]).certainly_le(delta) {
            return Err(SymbolicError::NotPseudoOrbit(i, delta.to_string()));
        }
    }
    let head: Vec<u8> = po[..po.len() - 1].iter().map(|x| x.at(0)).collect();
    let z = last.prepend(&head);
    if !s.contains(&z) {
        return Err(SymbolicError::Certificate(0));
    }
    let mut max_dist = Scalar::zero();
    for (i, x) in po.iter().enumerate() {
        let d = z.shift_by(i).dist(x);
        if !d.certainly_le(delta) {
            return Err(SymbolicError::Certificate(i));
        }
        if max_dist.certainly_le(&d) {
            max_dist = d;
        }
    }
    Ok(WaltersCertificate { z, max_dist, delta: delta.clone() })
}

/// A random nonempty SFT with alphabet size in `2..=max_alphabet` and memory at most `max_memory`.
pub fn random_sft<R: Rng>(rng: &mut R, max_alphabet: u8, max_memory: usize) -> SftSpec {
    loop {
        let alphabet = rng.gen_range(2..=max_alphabet.max(2));
        let count = rng.gen_range(0..=3);
        let forbidden = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=max_memory + 1);
                (0..len).map(|_| rng.gen_range(0..alphabet)).collect()
            })
            .collect();
        let s = SftSpec { alphabet, forbidden };
        if s.is_nonempty() {
            return s;
        }
    }
}

/// Random continuation of `word` (whose last `memory` symbols must be alive),
/// closed into a cycle once a state of the last `max(memory, 3)` symbols repeats.
fn walk<R: Rng>(s: &SftSpec, alive: &HashSet<Vec<u8>>, mut word: Vec<u8>, extra: usize, rng: &mut R) -> SymSeq {
    let m = s.memory();
    let state_len = m.max(3);
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut steps = 0usize;
    loop {
        if steps >= extra && word.len() >= state_len {
            let state = word[word.len() - state_len..].to_vec();
            if let Some(&t) = seen.get(&state) {
                let cycle = word[t..].to_vec();
                word.truncate(t);
                return SymSeq::new(word, cycle).expect("nonempty cycle");
            }
            seen.insert(state, word.len());
        }
        let node = &word[word.len() - m..];
        let next = *s.successors_in(node, alive).choose(rng).expect("alive node has a successor");
        word.push(next);
        steps += 1;
    }
}

fn random_alive<R: Rng>(alive: &HashSet<Vec<u8>>, rng: &mut R) -> Vec<u8> {
    let mut nodes: Vec<&Vec<u8>> = alive.iter().collect();
    nodes.sort();
    (*nodes.choose(rng).expect("nonempty space")).clone()
}

/// A random point of the space with a prefix of roughly `len` free symbols.
pub fn random_point<R: Rng>(s: &SftSpec, len: usize, rng: &mut R) -> SymSeq {
    let alive = s.alive_nodes();
    let start = random_alive(&alive, rng);
    walk(s, &alive, start, len, rng)
}

/// A random δ-pseudo-orbit of `len + 1` points that is usually not a true orbit.
pub fn random_pseudo_orbit<R: Rng>(
    s: &SftSpec,
    delta: &Scalar,
    len: usize,
    rng: &mut R,
) -> Result<Vec<SymSeq>, SymbolicError> {
    let p = agreement_for(delta)?;
    let m = s.memory();
    let alive = s.alive_nodes();
    let mut base = random_alive(&alive, rng);
    let offset = base.len();
    while base.len() < offset + len + p + 2 {
        let node = &base[base.len() - m..];
        base.push(*s.successors_in(node, &alive).choose(rng).expect("alive node has a successor"));
    }
    let mut out = Vec::with_capacity(len + 1);
    for i in 0..=len {
        let a = offset + i;
        let seed_word = base[a - m.min(a)..a + p + 1].to_vec();
        let tail = walk(s, &alive, seed_word, rng.gen_range(0..4), rng);
        out.push(tail.shift_by(m.min(a)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> SymSeq {
        s.parse().unwrap()
    }

    #[test]
    fn ladder_membership() {
        assert!(SftSpec::ladder(2).contains(&SymSeq::zeros()));
        assert!(SftSpec::ladder(1).contains(&q("(100)")));
        assert!(!SftSpec::ladder(2).contains(&q("(100)")));
        assert!(!SftSpec::ladder(0).contains(&q("0(1)")));
        assert_eq!(SftSpec::ladder(3).memory(), 4);
        assert_eq!(SftSpec::full(2).memory(), 0);
    }

    #[test]
    fn spec_text_round_trip() {
        let s = SftSpec::ladder(1);
        assert_eq!(s.to_string(), "alphabet: 0 1\nforbidden: 11 101\n");
        assert_eq!(s.to_string().parse::<SftSpec>().unwrap(), s);
    }

    #[test]
    fn constant_pseudo_orbit_shadows_itself() {
        let s = SftSpec::ladder(0);
        let x = q("(10)");
        let po = vec![x.clone(), x.shift(), x.clone()];
        let c = walters_shadow(&s, &po, &Scalar::ratio(1, 8)).unwrap();
        assert_eq!(c.z, x);
        assert_eq!(c.max_dist, Scalar::zero());
    }

    #[test]
    fn hopping_between_shifts() {
        let s = SftSpec::ladder(0);
        // σ(1000(10)) agrees with 000(01) on three symbols
        let po = vec![q("1000(10)"), q("000(01)"), q("00(01)")];
        let c = walters_shadow(&s, &po, &Scalar::ratio(1, 8)).unwrap();
        assert!(s.contains(&c.z));
        assert_eq!(c.z.to_string(), "1000(01)");
    }

    #[test]
    fn rejects_large_delta() {
        let s = SftSpec::ladder(1);
        let x = SymSeq::zeros();
        assert!(walters_shadow(&s, &[x.clone(), x], &Scalar::ratio(1, 2)).is_err());
    }

    #[test]
    fn random_pseudo_orbits_are_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let s = random_sft(&mut rng, 3, 3);
            let delta = walters_delta(&s, &Scalar::ratio(1, 4));
            let po = random_pseudo_orbit(&s, &delta, 20, &mut rng).unwrap();
            let c = walters_shadow(&s, &po, &delta).unwrap();
            assert!(s.contains(&c.z));
        }
    }
}
