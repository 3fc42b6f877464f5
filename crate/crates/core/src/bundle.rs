//! Divisor bounds on the order of the configuration bundle over a hypergraph,
//! and the dimension bound for regular embeddings.
//!
//! Only the arithmetic of the bounds is implemented. `rho(k)` counts the
//! integers `1 <= j <= k` with `j mod 8` in `{0, 1, 2, 4}`, and
//! `a(m, n) = 2^rho(m - 1) * prod_{3 <= p <= n prime} p^floor((m - 1) / 2)`.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hyperdigraph};
use crate::linalg::is_prime;

pub fn rho(k: u64) -> u64 {
    // four hits in every full block of eight
    let full = k / 8 * 4;
    let rest = (1..=k % 8).filter(|j| matches!(j, 1 | 2 | 4)).count() as u64;
    full + rest
}

fn odd_prime_product(n: u64, exponent: u64) -> BigUint {
    (3..=n)
        .filter(|&p| is_prime(p))
        .fold(BigUint::one(), |acc, p| acc * BigUint::from(p).pow(exponent as u32))
}

pub fn a_coeff(m: u64, n: u64) -> Result<BigUint> {
    if m < 1 || n < 1 {
        return Err(Error::domain("a(m, n) needs m, n >= 1"));
    }
    Ok((BigUint::one() << rho(m - 1)) * odd_prime_product(n, (m - 1) / 2))
}

/// The spaces for which a bound is known.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum SpaceDescriptor {
    Surface { genus: u64 },
    Euclidean { m: u64 },
    Sphere { m: u64 },
    RealProjective { m: u64, n_embed: u64 },
    RealProjectiveTimesEuclidean { m: u64, k: u64, n_embed: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OrderBound {
    /// The order of the bundle divides this number.
    #[serde(serialize_with = "integer_or_text")]
    pub divides: BigUint,
    pub warning: Option<String>,
}

/// A JSON number when it fits in 64 bits, decimal text otherwise.
fn integer_or_text<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

/// Smallest `N` with `RP^m` embedded in `R^N`, for the few `m` where it is
/// classical: `RP^1` is a circle in the plane, `RP^2` embeds in `R^4` but not
/// `R^3`, `RP^3` in `R^5`, `RP^4` in `R^8`.
pub fn n_embed_reference(m: u64) -> Option<u64> {
    match m {
        1 => Some(2),
        2 => Some(4),
        3 => Some(5),
        4 => Some(8),
        _ => None,
    }
}

pub fn order_bound(space: SpaceDescriptor, n: u64) -> Result<OrderBound> {
    if n < 1 {
        return Err(Error::domain("n must be at least 1"));
    }
    let positive = |name: &str, v: u64| {
        if v == 0 {
            Err(Error::domain(format!("{name} must be positive")))
        } else {
            Ok(())
        }
    };
    let check_embed = |m: u64, n_embed: u64| {
        if n_embed < m + 1 {
            Err(Error::domain(format!("embedding dimension {n_embed} is below m + 1 = {}", m + 1)))
        } else {
            Ok(())
        }
    };
    let plain = |divides| Ok(OrderBound { divides, warning: None });
    match space {
        SpaceDescriptor::Surface { genus } => {
            if genus < 1 {
                return Err(Error::domain("surface genus must be at least 1"));
            }
            plain(BigUint::from(4u32))
        }
        SpaceDescriptor::Euclidean { m } => {
            positive("m", m)?;
            plain(a_coeff(m, n)?)
        }
        SpaceDescriptor::Sphere { m } => {
            positive("m", m)?;
            plain(a_coeff(m, n)? << (rho(m) - rho(m - 1)))
        }
        SpaceDescriptor::RealProjective { m, n_embed } => {
            positive("m", m)?;
            check_embed(m, n_embed)?;
            plain(a_coeff(m + 1, n)? << (rho(n_embed - 1) - rho(m)))
        }
        SpaceDescriptor::RealProjectiveTimesEuclidean { m, k, n_embed } => {
            positive("m", m)?;
            positive("k", k)?;
            check_embed(m, n_embed)?;
            let top = m + k - 1;
            let warning = (top % 2 == 1).then(|| {
                format!("m + k = {} is even; the odd-prime exponent (m + k - 1)/2 was rounded down to {}", m + k, top / 2)
            });
            Ok(OrderBound {
                divides: odd_prime_product(n, top / 2) << rho(n_embed + k - 1),
                warning,
            })
        }
    }
}

/// Lower bound `t + k` on the dimension of a space admitting a `k`-regular
/// embedding when the dual class in degree `t` is nonzero.
pub fn embedding_dimension_bound(t: u64, k: u64) -> Result<u64> {
    if k < 1 {
        return Err(Error::domain("k must be at least 1"));
    }
    Ok(t + k)
}

/// Whether each grade of a Σ-invariant hyperdigraph has `n!` times as many
/// edges as the corresponding grade of its projection.
pub fn sheet_count_check(hd: &Hyperdigraph) -> Result<bool> {
    if !hd.is_sigma_invariant() {
        return Err(Error::domain("hyperdigraph is not invariant under coordinate permutations"));
    }
    let h = hd.project();
    let top = hd.edges().iter().map(|e| e.cardinality()).max().unwrap_or(0);
    Ok((1..=top).all(|n| {
        let factorial: usize = (1..=n).product();
        hd.grade(n).count() == factorial * h.grade(n).count()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(0), 0);
        assert_eq!(rho(4), 3);
        assert_eq!(rho(10), 6);
        for k in 0..100 {
            assert_eq!(rho(k + 8), rho(k) + 4);
            assert!(rho(k + 1) >= rho(k));
        }
    }

    #[test]
    fn a_coeff_examples() {
        assert_eq!(a_coeff(2, 2).unwrap(), big(2));
        assert_eq!(a_coeff(3, 3).unwrap(), big(12));
        assert_eq!(a_coeff(4, 5).unwrap(), big(60));
        assert!(a_coeff(0, 1).is_err());
    }

    #[test]
    fn order_bound_examples() {
        assert_eq!(order_bound(SpaceDescriptor::Surface { genus: 2 }, 5).unwrap().divides, big(4));
        assert_eq!(order_bound(SpaceDescriptor::Euclidean { m: 3 }, 3).unwrap().divides, big(12));
        assert_eq!(order_bound(SpaceDescriptor::Sphere { m: 2 }, 2).unwrap().divides, big(4));
        assert_eq!(order_bound(SpaceDescriptor::Euclidean { m: 1 }, 9).unwrap().divides, big(1));
        assert!(order_bound(SpaceDescriptor::Surface { genus: 0 }, 1).is_err());
        assert!(order_bound(SpaceDescriptor::RealProjective { m: 3, n_embed: 3 }, 1).is_err());
    }

    #[test]
    fn projective_bounds() {
        // rho(4) - rho(2) = 1, a(3, 3) = 12
        let rp2 = order_bound(SpaceDescriptor::RealProjective { m: 2, n_embed: 5 }, 3).unwrap();
        assert_eq!(rp2.divides, big(24));
        let odd = order_bound(SpaceDescriptor::RealProjectiveTimesEuclidean { m: 2, k: 1, n_embed: 4 }, 3).unwrap();
        assert!(odd.warning.is_none());
        // 2^rho(4) * 3^1
        assert_eq!(odd.divides, big(24));
        let even = order_bound(SpaceDescriptor::RealProjectiveTimesEuclidean { m: 2, k: 2, n_embed: 4 }, 3).unwrap();
        assert!(even.warning.is_some());
    }

    #[test]
    fn embedding_bound_examples() {
        assert_eq!(embedding_dimension_bound(0, 3).unwrap(), 3);
        assert_eq!(embedding_dimension_bound(2, 2).unwrap(), 4);
        assert_eq!(embedding_dimension_bound(5, 4).unwrap(), 9);
        assert!(embedding_dimension_bound(1, 0).is_err());
    }

    #[test]
    fn sheet_counts() {
        assert!(sheet_count_check(&Hypergraph::from_lists([vec![0, 1, 2]]).lift()).unwrap());
        assert!(sheet_count_check(&Hypergraph::from_lists([vec![0, 1], vec![2, 3]]).lift()).unwrap());
        assert!(sheet_count_check(&Hyperdigraph::from_lists([vec![0, 1]])).is_err());
    }

    #[test]
    fn big_arguments_do_not_overflow() {
        assert!(a_coeff(64, 64).unwrap() > big(u64::MAX));
    }
}
