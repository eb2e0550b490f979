//! King stability decided by enumerating every representation and every
//! subrepresentation over a small prime field, Harder–Narasimhan filtrations
//! by brute force, wall scans and the stability-space embedding of a
//! contraction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};
use crate::Rational;

/// Total dimension allowed for enumeration.
pub const MAX_TOTAL_DIM: u32 = 4;
/// Number of representations allowed for enumeration.
pub const MAX_REPRESENTATIONS: u64 = 1 << 20;

/// A stability parameter: one rational per vertex.
pub type Kappa = BTreeMap<String, Rational>;

pub fn kappa_of(kappa: &Kappa, g: &DimVector) -> Rational {
    g.iter().map(|(v, n)| kappa.get(v).cloned().unwrap_or_default() * crate::rational::int(i64::from(*n))).sum()
}

/// A subspace of `F_p^n`: a basis in echelon form and the set of all its
/// vectors, encoded base `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Subspace {
    basis: Vec<Vec<u64>>,
    elements: BTreeSet<u64>,
}

fn encode(v: &[u64], p: u64) -> u64 {
    v.iter().rev().fold(0, |acc, x| acc * p + x)
}

fn span(basis: &[Vec<u64>], n: usize, p: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let count = p.pow(basis.len() as u32);
    for mut c in 0..count {
        let mut v = alloc::vec![0u64; n];
        for b in basis {
            let k = c % p;
            c /= p;
            for (x, y) in v.iter_mut().zip(b) {
                *x = (*x + k * y) % p;
            }
        }
        out.insert(encode(&v, p));
    }
    out
}

/// Every subspace of `F_p^n`.
fn subspaces(n: usize, p: u64) -> Vec<Subspace> {
    let vectors: Vec<Vec<u64>> = (0..p.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let x = c % p;
                    c /= p;
                    x
                })
                .collect()
        })
        .collect();
    let mut seen: BTreeSet<BTreeSet<u64>> = BTreeSet::new();
    let mut out = alloc::vec![Subspace { basis: Vec::new(), elements: span(&[], n, p) }];
    seen.insert(out[0].elements.clone());
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for v in &vectors {
                if s.elements.contains(&encode(v, p)) {
                    continue;
                }
                let mut basis = s.basis.clone();
                basis.push(v.clone());
                let elements = span(&basis, n, p);
                if seen.insert(elements.clone()) {
                    next.push(Subspace { basis, elements });
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A representation over `F_p`: one `dim(target) x dim(source)` matrix per
/// arrow, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpRep {
    pub p: u64,
    pub maps: BTreeMap<String, Vec<u64>>,
}

fn apply(m: &[u64], rows: usize, cols: usize, v: &[u64], p: u64) -> Vec<u64> {
    (0..rows).map(|r| (0..cols).map(|c| m[r * cols + c] * v[c]).sum::<u64>() % p).collect()
}

/// All subspace tuples of a dimension vector, in quiver vertex order.
struct Lattice {
    p: u64,
    dims: Vec<usize>,
    spaces: Vec<Vec<Subspace>>,
}

impl Lattice {
    fn new(q: &Quiver, g: &DimVector, p: u64) -> Self {
        let dims: Vec<usize> = q.vertices().iter().map(|v| g[v] as usize).collect();
        let spaces = dims.iter().map(|n| subspaces(*n, p)).collect();
        Lattice { p, dims, spaces }
    }

    /// Subrepresentations as index tuples together with their dimensions.
    fn subreps(&self, q: &Quiver, rep: &FpRep) -> Vec<(Vec<usize>, Vec<u32>)> {
        let sizes: Vec<usize> = self.spaces.iter().map(Vec::len).collect();
        let mut out = Vec::new();
        'tuples: for choice in crate::shuffle::cartesian(&sizes) {
            for a in q.arrows() {
                let s = q.vertex_index(&a.source).expect("valid");
                let t = q.vertex_index(&a.target).expect("valid");
                let us = &self.spaces[s][choice[s]];
                let ut = &self.spaces[t][choice[t]];
                for b in &us.basis {
                    let img = apply(&rep.maps[&a.id], self.dims[t], self.dims[s], b, self.p);
                    if !ut.elements.contains(&encode(&img, self.p)) {
                        continue 'tuples;
                    }
                }
            }
            let d = choice.iter().enumerate().map(|(k, c)| self.spaces[k][*c].basis.len() as u32).collect();
            out.push((choice, d));
        }
        out
    }
}

fn check_bounds(q: &Quiver, g: &DimVector, p: u64) -> Result<u64> {
    q.check_dim(g)?;
    if !matches!(p, 2 | 3 | 5 | 7) {
        return Err(Error::Precondition(format!("unsupported field size {p}")));
    }
    let total: u32 = g.values().sum();
    if total > MAX_TOTAL_DIM {
        return Err(Error::BoundExceeded(format!("total dimension {total} exceeds {MAX_TOTAL_DIM}")));
    }
    let entries: u64 = q.arrows().iter().map(|a| u64::from(g[&a.source] * g[&a.target])).sum();
    match u32::try_from(entries).ok().and_then(|e| p.checked_pow(e)) {
        Some(c) if c <= MAX_REPRESENTATIONS => Ok(c),
        _ => Err(Error::BoundExceeded(format!("{p}^{entries} representations exceed {MAX_REPRESENTATIONS}"))),
    }
}

fn rep_from_index(q: &Quiver, g: &DimVector, p: u64, mut c: u64) -> FpRep {
    let mut maps = BTreeMap::new();
    for a in q.arrows() {
        let n = (g[&a.source] * g[&a.target]) as usize;
        let m: Vec<u64> = (0..n)
            .map(|_| {
                let x = c % p;
                c /= p;
                x
            })
            .collect();
        maps.insert(a.id.clone(), m);
    }
    FpRep { p, maps }
}

fn dim_map(q: &Quiver, d: &[u32]) -> DimVector {
    q.vertices().iter().cloned().zip(d.iter().copied()).collect()
}

/// Searches for a representation of dimension `g` over `F_p` all of whose
/// subrepresentations `F` have `kappa(F) <= 0`. Requires `kappa(g) = 0`.
pub fn king_semistable_exists(q: &Quiver, g: &DimVector, kappa: &Kappa, p: u64) -> Result<Option<FpRep>> {
    if !kappa_of(kappa, g).is_zero() {
        return Err(Error::Precondition("kappa(gamma) must vanish".into()));
    }
    let count = check_bounds(q, g, p)?;
    let lattice = Lattice::new(q, g, p);
    for c in 0..count {
        let rep = rep_from_index(q, g, p, c);
        let ok = lattice.subreps(q, &rep).iter().all(|(_, d)| !kappa_of(kappa, &dim_map(q, d)).is_positive());
        if ok {
            return Ok(Some(rep));
        }
    }
    Ok(None)
}

/// One step of a Harder–Narasimhan filtration: the dimension of the factor
/// and its slope `kappa / dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnFactor {
    pub dim: DimVector,
    pub slope: Rational,
}

/// The filtration by maximal destabilizing subobjects for the slope
/// `kappa(F) / total(F)`, found greedily over all subrepresentations.
pub fn hn_filtration(q: &Quiver, g: &DimVector, kappa: &Kappa, rep: &FpRep) -> Result<Vec<HnFactor>> {
    check_bounds(q, g, rep.p)?;
    let lattice = Lattice::new(q, g, rep.p);
    let subs = lattice.subreps(q, rep);
    let contains = |big: &[usize], small: &[usize]| {
        big.iter().zip(small).enumerate().all(|(k, (b, s))| {
            let (bs, ss) = (&lattice.spaces[k][*b], &lattice.spaces[k][*s]);
            ss.elements.is_subset(&bs.elements)
        })
    };
    let full: Vec<u32> = q.vertices().iter().map(|v| g[v]).collect();
    let mut current = subs.iter().find(|(_, d)| d.iter().all(|x| *x == 0)).expect("zero subobject").clone();
    let mut out = Vec::new();
    while current.1 != full {
        let mut best: Option<(Rational, u32, &(Vec<usize>, Vec<u32>))> = None;
        for s in &subs {
            if !contains(&s.0, &current.0) || s.1 == current.1 {
                continue;
            }
            let diff: Vec<u32> = s.1.iter().zip(&current.1).map(|(a, b)| a - b).collect();
            let n: u32 = diff.iter().sum();
            let slope = kappa_of(kappa, &dim_map(q, &diff)) / crate::rational::int(i64::from(n));
            let better = match &best {
                None => true,
                Some((bs, bn, _)) => slope > *bs || (slope == *bs && n > *bn),
            };
            if better {
                best = Some((slope, n, s));
            }
        }
        let (slope, _, s) = best.expect("the whole representation is a candidate");
        let diff: Vec<u32> = s.1.iter().zip(&current.1).map(|(a, b)| a - b).collect();
        out.push(HnFactor { dim: dim_map(q, &diff), slope });
        current = s.clone();
    }
    Ok(out)
}

/// Verdicts for one dimension vector of a wall scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallScan {
    pub gamma: DimVector,
    pub samples: Vec<(Kappa, bool)>,
}

impl WallScan {
    pub fn is_wall(&self) -> bool {
        self.samples.iter().any(|(_, v)| *v)
    }
}

/// All nonzero dimension vectors with entries at most `max` and total at
/// most the enumeration bound.
pub fn dimension_vectors(q: &Quiver, max: &DimVector) -> Vec<DimVector> {
    let sizes: Vec<usize> = q.vertices().iter().map(|v| max.get(v).copied().unwrap_or(0) as usize + 1).collect();
    crate::shuffle::cartesian(&sizes)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x as u32).collect::<Vec<u32>>())
        .filter(|d| {
            let t: u32 = d.iter().sum();
            t > 0 && t <= MAX_TOTAL_DIM
        })
        .map(|d| dim_map(q, &d))
        .collect()
}

/// Nonzero points of `grid^I` on `gamma^perp`.
pub fn sample_kappas(q: &Quiver, g: &DimVector, grid: &[Rational]) -> Vec<Kappa> {
    let n = q.vertices().len();
    crate::shuffle::cartesian(&alloc::vec![grid.len(); n])
        .into_iter()
        .map(|c| q.vertices().iter().cloned().zip(c.into_iter().map(|k| grid[k].clone())).collect::<Kappa>())
        .filter(|k| k.values().any(|x| !x.is_zero()) && kappa_of(k, g).is_zero())
        .collect()
}

/// For each dimension vector up to `max`, samples `kappa` on `gamma^perp`
/// and records whether a semistable representation exists.
pub fn wall_support_scan(q: &Quiver, max: &DimVector, grid: &[Rational], p: u64) -> Result<Vec<WallScan>> {
    let mut out = Vec::new();
    for g in dimension_vectors(q, max) {
        if check_bounds(q, &g, p).is_err() {
            continue;
        }
        let mut samples = Vec::new();
        for k in sample_kappas(q, &g, grid) {
            let v = king_semistable_exists(q, &g, &k, p)?.is_some();
            samples.push((k, v));
        }
        out.push(WallScan { gamma: g, samples });
    }
    Ok(out)
}

/// `kappa_i = khat_i` off the contracted pair, `kappa_+ = khat_0 / (1 + t)`
/// and `kappa_- = t khat_0 / (1 + t)`.
pub fn eta_embed(q: &Quiver, a0: &str, khat: &Kappa, t: &Rational) -> Result<Kappa> {
    let (ip, im) = crate::quiver::contraction_ends(q, a0)?;
    let denom = Rational::from_integer(1.into()) + t;
    if denom.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let k0 = khat.get(&ip).cloned().ok_or_else(|| Error::UnknownVertex(ip.clone()))?;
    let mut out = Kappa::new();
    for v in q.vertices() {
        let val = if *v == ip {
            &k0 / &denom
        } else if *v == im {
            t * &k0 / &denom
        } else {
            khat.get(v).cloned().ok_or_else(|| Error::UnknownVertex(v.clone()))?
        };
        out.insert(v.clone(), val);
    }
    Ok(out)
}

/// The default grid for the embedding parameter.
pub fn default_eta_grid() -> Vec<Rational> {
    use crate::rational::{frac, int};
    alloc::vec![frac(1, 4), frac(1, 3), frac(1, 2), int(1), int(2), int(3), int(4)]
}

/// The default grid together with its negatives. Negative parameters push
/// `kappa_-` past `khat_0`, which some walls need.
pub fn extended_eta_grid() -> Vec<Rational> {
    let mut out = default_eta_grid();
    let neg: Vec<Rational> = out.iter().map(|t| -t).filter(|t| *t != crate::rational::int(-1)).collect();
    out.extend(neg);
    out
}

/// One sampled wall point of the contracted quiver and the embedding
/// parameter (if any) that lifts it to a wall point of `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaSample {
    pub gamma_hat: DimVector,
    pub kappa_hat: Kappa,
    pub lifted: Option<(Rational, Kappa)>,
}

/// Checks that wall points of the contracted quiver lift under the
/// embedding to wall points of `Q` for the lifted dimension vector.
pub fn eta_check(
    q: &Quiver,
    a0: &str,
    max_hat: &DimVector,
    sample_grid: &[Rational],
    eta_grid: &[Rational],
    p: u64,
) -> Result<Vec<EtaSample>> {
    let data = crate::contraction::ContractionData::new(q, a0)?;
    let qh = data.quiver(q)?;
    let (ip, im) = (data.i_plus.clone(), data.i_minus.clone());
    let mut out = Vec::new();
    for gh in dimension_vectors(&qh, max_hat) {
        let mut g: DimVector = gh.clone();
        g.insert(im.clone(), gh[&ip]);
        if check_bounds(q, &g, p).is_err() || check_bounds(&qh, &gh, p).is_err() {
            continue;
        }
        for kh in sample_kappas(&qh, &gh, sample_grid) {
            if king_semistable_exists(&qh, &gh, &kh, p)?.is_none() {
                continue;
            }
            let mut lifted = None;
            for t in eta_grid {
                let k = eta_embed(q, a0, &kh, t)?;
                if king_semistable_exists(q, &g, &k, p)?.is_some() {
                    lifted = Some((t.clone(), k));
                    break;
                }
            }
            out.push(EtaSample { gamma_hat: gh.clone(), kappa_hat: kh, lifted });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn k(q: &Quiver, v: &[i64]) -> Kappa {
        q.vertices().iter().cloned().zip(v.iter().map(|x| int(*x))).collect()
    }

    #[test]
    fn extended_grid_skips_the_pole() {
        let g = extended_eta_grid();
        assert_eq!(g.len(), 13);
        assert!(!g.contains(&int(-1)));
        assert_eq!(g[..7], default_eta_grid()[..]);
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(subspaces(2, 2).len(), 5);
        assert_eq!(subspaces(2, 3).len(), 6);
        assert_eq!(subspaces(3, 2).len(), 16);
    }

    #[test]
    fn a2_semistability() {
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2")]);
        let g = q.dim(&[1, 1]);
        let w = king_semistable_exists(&q, &g, &k(&q, &[1, -1]), 2).unwrap().unwrap();
        assert_eq!(w.maps["a"], alloc::vec![1]);
        assert!(king_semistable_exists(&q, &g, &k(&q, &[-1, 1]), 2).unwrap().is_none());
        assert!(king_semistable_exists(&q, &q.dim(&[1, 0]), &k(&q, &[0, 5]), 2).unwrap().is_some());
        assert!(matches!(king_semistable_exists(&q, &g, &k(&q, &[1, 1]), 2), Err(Error::Precondition(_))));
        assert!(matches!(
            king_semistable_exists(&q, &q.dim(&[3, 2]), &k(&q, &[2, -3]), 2),
            Err(Error::BoundExceeded(_))
        ));
    }

    #[test]
    fn hn_of_semistable_is_single() {
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2")]);
        let g = q.dim(&[1, 1]);
        let kap = k(&q, &[1, -1]);
        let w = king_semistable_exists(&q, &g, &kap, 2).unwrap().unwrap();
        assert_eq!(hn_filtration(&q, &g, &kap, &w).unwrap().len(), 1);
        let split = FpRep { p: 2, maps: [("a".into(), alloc::vec![0])].into_iter().collect() };
        let hn = hn_filtration(&q, &g, &kap, &split).unwrap();
        assert_eq!(hn.len(), 2);
        assert!(hn[0].slope > hn[1].slope);
    }

    #[test]
    fn a2_walls() {
        let q = Quiver::build(&["1", "2"], &[("a", "1", "2")]);
        let grid: Vec<Rational> = (-2..=2).map(int).collect();
        let scan = wall_support_scan(&q, &q.dim(&[1, 1]), &grid, 2).unwrap();
        assert_eq!(scan.len(), 3);
        for s in &scan {
            assert!(s.is_wall());
            for (kap, v) in &s.samples {
                if s.gamma == q.dim(&[1, 1]) {
                    assert_eq!(*v, kap["2"] <= int(0));
                } else {
                    assert!(*v);
                }
            }
        }
    }

    #[test]
    fn embedding() {
        let q = Quiver::build(&["p", "m", "j"], &[("a0", "p", "m"), ("b", "m", "j")]);
        let kh: Kappa = [("j".into(), int(1)), ("p".into(), int(-2))].into_iter().collect();
        let kap = eta_embed(&q, "a0", &kh, &int(1)).unwrap();
        assert_eq!(kap["p"], int(-1));
        assert_eq!(kap["m"], int(-1));
        assert_eq!(kap["j"], int(1));
        let kh: Kappa = [("j".into(), int(0)), ("p".into(), int(3))].into_iter().collect();
        let kap = eta_embed(&q, "a0", &kh, &int(2)).unwrap();
        assert_eq!((kap["p"].clone(), kap["m"].clone()), (int(1), int(2)));
        assert_eq!(eta_embed(&q, "a0", &kh, &int(-1)), Err(Error::DivisionByZero));
        let grid: Vec<Rational> = (-2..=2).map(int).collect();
        let samples = eta_check(&q, "a0", &[("p".into(), 1), ("j".into(), 1)].into_iter().collect(), &grid, &default_eta_grid(), 2).unwrap();
        assert!(!samples.is_empty());
        assert!(samples.iter().all(|s| s.lifted.is_some()));
    }
}
