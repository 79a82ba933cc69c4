//! Conversion between the two natural frames of a sixfold family, and the
//! Christoffel symbols of the induced connection recovered from the table.
//!
//! Tabulated components live on the rescaled frame `e_i`, orthonormal for
//! the averaged metric; classical curvature references state their data on
//! the induced-metric orthonormal frame `f_i`. The two differ leg by leg by
//! the exact factor `e_i = sqrt(2/(1 + lambda_i^2)) f_i`, which for the
//! sixfold curvature values lies in the quadratic-surd field.

use num_traits::{One, Zero};

use crate::error::IsoError;
use crate::family::AngleData;
use crate::surd::Surd;
use crate::Result;

use super::AlphaTable;

/// Exact leg scale `sqrt(2/(1 + lambda_d^2)) = sqrt(2) sin(theta_d)` of
/// distribution `d` (0-based) in the sixfold family.
pub fn frame_scale(d: usize) -> Surd {
    let half = Surd::frac(1, 2);
    match d % 6 {
        0 | 5 => (Surd::sqrt3() - Surd::one()) * half,
        1 | 4 => Surd::one(),
        _ => (Surd::sqrt3() + Surd::one()) * half,
    }
}

/// Exact principal curvature of distribution `d` (0-based), `cot theta_d`.
pub fn lambda6(d: usize) -> Surd {
    AngleData::lambda_exact6(d % 6)
}

/// Component of the cubic form on the induced-metric orthonormal frame:
/// `alpha(f_i, f_j, f_k)` from the tabulated `alpha(e_i, e_j, e_k)`,
/// 0-based frame indices.
pub fn f_component(table: &AlphaTable, i: usize, j: usize, k: usize) -> Surd {
    let s = frame_scale(table.dist(i)) * frame_scale(table.dist(j)) * frame_scale(table.dist(k));
    table.get(i, j, k) / s
}

/// Christoffel symbol `g0(D_{f_i} f_j, f_k)` of the induced connection,
/// recovered from the cubic form as `alpha(f_i,f_j,f_k)/(lambda_j - lambda_k)`.
/// Defined only when legs `j` and `k` carry distinct principal curvatures.
pub fn christoffel(table: &AlphaTable, i: usize, j: usize, k: usize) -> Result<Surd> {
    let denom = lambda6(table.dist(j)) - lambda6(table.dist(k));
    if denom.is_zero() {
        return Err(IsoError::Config(format!(
            "Christoffel entry ({i},{j},{k}) is undefined: legs {j} and {k} \
             share the same principal curvature"
        )));
    }
    Ok(f_component(table, i, j, k) / denom)
}

/// Frame-converted data of a table: the induced-frame component of every
/// stored triple, and every Christoffel symbol obtainable from it (ordered
/// slot choices with distinct curvatures on the last two legs).
#[derive(Debug, Clone)]
pub struct FrameSet {
    /// `(sorted 0-based triple, alpha(f_i,f_j,f_k))` per stored entry.
    pub alpha_f: Vec<([usize; 3], Surd)>,
    /// `((i, j, k), g0(D_{f_i} f_j, f_k))` for each admissible ordering.
    pub christoffel: Vec<((usize, usize, usize), Surd)>,
}

/// Converts every stored component to the induced frame and enumerates the
/// Christoffel symbols it determines.
pub fn frame_convert(table: &AlphaTable) -> Result<FrameSet> {
    let mut alpha_f = Vec::new();
    let mut christoffel_set = Vec::new();
    for (key, _) in table.entries() {
        let [a, b, c] = *key;
        alpha_f.push(([a, b, c], f_component(table, a, b, c)));
        for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            if table.dist(j) != table.dist(k) {
                christoffel_set.push(((i, j, k), christoffel(table, i, j, k)?));
            }
        }
    }
    Ok(FrameSet {
        alpha_f,
        christoffel: christoffel_set,
    })
}

/// Exact curvature compatibility between two distributions of a table.
///
/// For every pair of unit basis legs `f_a` (distribution `di`) and `f_b`
/// (distribution `dj`) the relation
///
/// ```text
/// 1 + lambda_i lambda_j
///     = 2 sum_k alpha_f(a,b,k)^2 / ((lambda_i - lambda_k)(lambda_j - lambda_k))
/// ```
///
/// is evaluated in exact arithmetic, with `k` running over all legs outside
/// both distributions. Returns whether it holds for every leg pair.
pub fn classical_weyl_table(table: &AlphaTable, di: usize, dj: usize) -> Result<bool> {
    if di >= 6 || dj >= 6 || di == dj {
        return Err(IsoError::Config(format!(
            "curvature relation needs two distinct distribution labels in 0..6, got ({di}, {dj})"
        )));
    }
    let li = lambda6(di);
    let lj = lambda6(dj);
    let lhs = Surd::one() + li * lj;
    let dim = table.dim();
    for a in (0..dim).filter(|&a| table.dist(a) == di) {
        for b in (0..dim).filter(|&b| table.dist(b) == dj) {
            let mut rhs = Surd::zero();
            for k in 0..dim {
                let dk = table.dist(k);
                if dk == di || dk == dj {
                    continue;
                }
                let w = f_component(table, a, b, k);
                if w.is_zero() {
                    continue;
                }
                let lk = lambda6(dk);
                rhs = rhs + Surd::integer(2) * w * w / ((li - lk) * (lj - lk));
            }
            if rhs != lhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::load_model;

    fn table_of(name: &str) -> AlphaTable {
        load_model(name)
            .unwrap()
            .as_tabulated()
            .unwrap()
            .table()
            .clone()
    }

    #[test]
    fn frame_scales_square_to_metric_factor() {
        // scale_d^2 (1 + lambda_d^2) = 2 exactly, for every distribution.
        for d in 0..6 {
            let s = frame_scale(d);
            let l = lambda6(d);
            assert_eq!(s * s * (Surd::one() + l * l), Surd::integer(2), "d = {d}");
        }
        assert_eq!(frame_scale(1), Surd::one());
        assert_eq!(
            frame_scale(0),
            (Surd::sqrt3() - Surd::one()) * Surd::frac(1, 2)
        );
        assert_eq!(
            frame_scale(2),
            (Surd::sqrt3() + Surd::one()) * Surd::frac(1, 2)
        );
    }

    #[test]
    fn induced_frame_components() {
        let t = table_of("g6-hom-m1");
        // Scales of distributions 0,1,2 multiply to 1/2, so the stored
        // sqrt(3/2) becomes 2*sqrt(3/2) = sqrt(6).
        assert_eq!(f_component(&t, 0, 1, 2), Surd::sqrt6());
        // Triple (0,2,4): scales (sqrt3-1)/2 * (sqrt3+1)/2 * 1 = 1/2 again,
        // stored value -2*sqrt(3/2) becomes -2*sqrt(6).
        assert_eq!(
            f_component(&t, 0, 2, 4),
            -Surd::integer(2) * Surd::sqrt6()
        );
        // Absent triples stay zero in either frame.
        assert!(f_component(&t, 0, 1, 3).is_zero());
    }

    #[test]
    fn christoffel_values_and_undefined_entries() {
        let t = table_of("g6-hom-m1");
        // First slot 0, derivative pair (2,4): lambda_2 - lambda_4 =
        // (2 - sqrt3) - (-1) = 3 - sqrt3, so the value is
        // -2 sqrt6 / (3 - sqrt3) = -(sqrt2 + sqrt6).
        let v = christoffel(&t, 0, 2, 4).unwrap();
        assert_eq!(v, -(Surd::sqrt2() + Surd::sqrt6()));
        // Antisymmetry in the last two slots with the curvature weights:
        // swapping (j,k) flips the denominator sign.
        let w = christoffel(&t, 0, 4, 2).unwrap();
        assert_eq!(w, -v);
        // Same distribution on the last two legs is undefined.
        assert!(christoffel(&t, 0, 1, 1).is_err());
        let t2 = table_of("g6-hom-m2");
        // Legs 1 and 7 are the two legs of one distribution.
        assert!(christoffel(&t2, 0, 1, 7).is_err());
    }

    #[test]
    fn frame_convert_enumerates_all_orderings() {
        let t = table_of("g6-hom-m1");
        let fs = frame_convert(&t).unwrap();
        assert_eq!(fs.alpha_f.len(), 5);
        // All stored triples touch three distinct distributions, so every
        // ordering is admissible: 6 per entry.
        assert_eq!(fs.christoffel.len(), 30);
        let entry = fs
            .christoffel
            .iter()
            .find(|(idx, _)| *idx == (0, 2, 4))
            .unwrap();
        assert_eq!(entry.1, -(Surd::sqrt2() + Surd::sqrt6()));
    }

    #[test]
    fn curvature_relation_holds_on_both_tables() {
        for name in ["g6-hom-m1", "g6-hom-m2"] {
            let t = table_of(name);
            for di in 0..6 {
                for dj in (di + 1)..6 {
                    assert!(
                        classical_weyl_table(&t, di, dj).unwrap(),
                        "{name}: pair ({di}, {dj})"
                    );
                }
            }
        }
    }

    #[test]
    fn curvature_relation_opposite_pair_is_trivial() {
        // Distributions three apart have 1 + lambda lambda' = 0, and the
        // tables carry no coupling between them: both sides vanish.
        let t = table_of("g6-hom-m1");
        let li = lambda6(2);
        let lj = lambda6(5);
        assert!((Surd::one() + li * lj).is_zero());
        assert!(classical_weyl_table(&t, 2, 5).unwrap());
    }

    #[test]
    fn curvature_relation_detects_tampering() {
        // Doubling one stored value breaks the relation for the pairs it
        // couples.
        let t = table_of("g6-hom-m1");
        let mut comps = t.components_canonical();
        for c in &mut comps {
            if (c.0, c.1, c.2) == (1, 2, 3) {
                c.3 = "2*sqrt(3/2)".into();
            }
        }
        let bad = AlphaTable::new(1, &comps).unwrap();
        assert!(!classical_weyl_table(&bad, 0, 1).unwrap());
    }

    #[test]
    fn rejects_bad_distribution_pairs() {
        let t = table_of("g6-hom-m1");
        assert!(classical_weyl_table(&t, 0, 0).is_err());
        assert!(classical_weyl_table(&t, 0, 6).is_err());
    }
}
