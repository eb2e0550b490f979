//! Seeded random inputs for the verification suites.

use num_traits::Zero;
use qpedge_core::path::{PathSymbol, Potential, QuiverWithPotential};
use qpedge_core::poly::Poly;
use qpedge_core::quiver::{Arrow, DimVector, Quiver};
use qpedge_core::shuffle::{ShuffleAlgebra, SymPoly};
use qpedge_core::Rational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A quiver on `2..=max_vertices` vertices `v0, v1, ...` with the arrow
/// `a0: v0 -> v1` and up to `max_arrows - 1` further arrows `b0, b1, ...`.
pub fn contractible_quiver(rng: &mut SuiteRng, max_vertices: usize, max_arrows: usize, loops: bool) -> Quiver {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arrows = vec![Arrow::new("a0", "v0", "v1")];
    let extra = rng.gen_range(0..max_arrows.max(1));
    for k in 0..extra {
        let (s, t) = loop {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            if loops || s != t {
                break (s, t);
            }
        };
        arrows.push(Arrow::new(format!("b{k}"), names[s].clone(), names[t].clone()));
    }
    Quiver::new(names, arrows).expect("fresh ids")
}

/// A dimension vector with equal ranks at `v0` and `v1` and all ranks at
/// most `max_rank`, not all zero.
pub fn equal_sector_gamma(rng: &mut SuiteRng, q: &Quiver, max_rank: u32) -> DimVector {
    loop {
        let mut g = q.zero_dim();
        for v in q.vertices() {
            g.insert(v.clone(), rng.gen_range(0..=max_rank));
        }
        let r = g["v0"];
        g.insert("v1".into(), r);
        if g.values().any(|n| *n > 0) {
            return g;
        }
    }
}

fn power_sum(alg: &ShuffleAlgebra, v: &str, rank: u32, k: u32) -> Poly {
    let mut p = Poly::zero();
    for s in 1..=rank {
        p = &p + &Poly::var(alg.var(v, s as u16).expect("vertex")).pow(k);
    }
    p
}

/// A random symmetric polynomial of degree at most `max_degree`: a sum of
/// up to three products of power sums, with small integer coefficients.
pub fn symmetric(rng: &mut SuiteRng, alg: &ShuffleAlgebra, gamma: &DimVector, max_degree: u32) -> SymPoly {
    let support: Vec<(&String, u32)> = gamma.iter().filter(|(_, n)| **n > 0).map(|(v, n)| (v, *n)).collect();
    let mut poly = Poly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let c = loop {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        let mut term = Poly::int(c);
        let mut budget = rng.gen_range(0..=max_degree);
        while budget > 0 && !support.is_empty() {
            let (v, n) = support.choose(rng).expect("nonempty");
            let k = rng.gen_range(1..=budget);
            term = &term * &power_sum(alg, v, *n, k);
            budget -= k;
        }
        poly = &poly + &term;
    }
    alg.sym(gamma.clone(), poly).expect("power sums are symmetric")
}

/// Simple cycles of length 2 to 4 in forward arrows, each listed once.
pub fn short_cycles(q: &Quiver) -> Vec<Vec<String>> {
    fn go(q: &Quiver, start: &str, at: &str, path: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if path.len() >= 4 {
            return;
        }
        for a in q.arrows_out_of(at) {
            if path.contains(&a.id) {
                continue;
            }
            path.push(a.id.clone());
            if a.target == start && path.len() >= 2 {
                out.push(path.clone());
            } else if a.target != start {
                go(q, start, &a.target, path, out);
            }
            path.pop();
        }
    }
    let mut out: Vec<Vec<String>> = Vec::new();
    for v in q.vertices() {
        go(q, v, v, &mut Vec::new(), &mut out);
    }
    // keep one rotation per cycle
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|c| {
        let mut key = c.clone();
        let m = (0..key.len()).min_by_key(|&i| key[i].clone()).expect("nonempty");
        key.rotate_left(m);
        seen.insert(key)
    });
    out
}

/// A potential made of a random subset of the cycles of length at least 3,
/// with coefficient 1. Cycles are read so that the first arrow acts first.
pub fn random_potential(rng: &mut SuiteRng, q: &Quiver) -> Potential {
    let mut w = Potential::zero();
    for c in short_cycles(q) {
        if c.len() >= 3 && rng.gen_bool(0.5) {
            let syms: Vec<PathSymbol> = c.iter().rev().map(PathSymbol::fwd).collect();
            w.add_word(q, &syms, Rational::from_integer(1.into())).expect("closed cycle");
        }
    }
    w
}

/// A quiver around `a0: p -> m` for the mutation square: `p` has no other
/// outgoing arrows (`plus_case`), or `m` no other incoming arrows.
pub fn mutation_candidate(rng: &mut SuiteRng, plus_case: bool) -> QuiverWithPotential {
    let others = ["j", "k", "n"];
    let n = rng.gen_range(1..=3);
    let mut vertices = vec!["p".to_string(), "m".to_string()];
    vertices.extend(others[..n].iter().map(|s| s.to_string()));
    let mut arrows = vec![Arrow::new("a0", "p", "m")];
    let count = rng.gen_range(1..=5);
    for k in 0..count {
        let s = vertices.choose(rng).expect("vertices").clone();
        let t = vertices.choose(rng).expect("vertices").clone();
        if s == t {
            continue;
        }
        let blocked = if plus_case { s == "p" } else { t == "m" };
        if blocked {
            continue;
        }
        arrows.push(Arrow::new(format!("b{k}"), s, t));
    }
    let q = Quiver::new(vertices, arrows).expect("fresh ids");
    let w = random_potential(rng, &q);
    QuiverWithPotential::new(q, w, None).expect("valid")
}

/// A nonzero random rational with small numerator and denominator.
pub fn small_rational(rng: &mut SuiteRng) -> Rational {
    loop {
        let r = Rational::new(rng.gen_range(-4..=4i64).into(), rng.gen_range(1..=3i64).into());
        if !r.is_zero() {
            return r;
        }
    }
}
