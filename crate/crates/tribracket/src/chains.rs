//! Seeded random sequences of Reidemeister I and II moves.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribracket_core::{Diagram, KinkKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Kink { arc: u32, kind: KinkKind },
    Poke { arc1: u32, arc2: u32 },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Kink { arc, kind } => write!(f, "kink {kind:?} on arc {arc}"),
            Move::Poke { arc1, arc2 } => write!(f, "poke arc {arc1} under arc {arc2}"),
        }
    }
}

/// Pairs of distinct arcs bordering a common region. On a crossingless
/// diagram the labels are the components.
fn poke_pairs(d: &Diagram) -> Vec<(u32, u32)> {
    if d.num_crossings() == 0 {
        return match d.num_components() {
            1 => vec![(1, 1)],
            2 => vec![(1, 2), (2, 1)],
            _ => Vec::new(),
        };
    }
    let arcs = d.arcs();
    let sides: Vec<BTreeSet<usize>> = arcs
        .iter()
        .map(|a| {
            let (x, p) = a.tail;
            let (y, q) = a.head;
            // Corners on either side of the arc at both ends.
            [d.region_at(x, p), d.region_at(x, (p + 3) % 4), d.region_at(y, q), d.region_at(y, (q + 3) % 4)]
                .into_iter()
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for (i, a) in arcs.iter().enumerate() {
        for (j, b) in arcs.iter().enumerate() {
            if i != j && !sides[i].is_disjoint(&sides[j]) {
                out.push((a.label, b.label));
            }
        }
    }
    out
}

/// Applies `steps` random kinks and pokes, returning the moves taken and
/// the diagram after each one. Fails only if a diagram admits no move.
pub fn random_chain(start: &Diagram, steps: usize, seed: u64) -> Result<Vec<(Move, Diagram)>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = start.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let labels = d.pd().labels();
        let pairs = poke_pairs(&d);
        let mut next = None;
        for _ in 0..64 {
            let mv = if pairs.is_empty() || rng.gen_bool(0.5) {
                let Some(&arc) = labels.choose(&mut rng) else {
                    break;
                };
                Move::Kink { arc, kind: *KinkKind::ALL.choose(&mut rng).unwrap() }
            } else {
                let &(arc1, arc2) = pairs.choose(&mut rng).unwrap();
                Move::Poke { arc1, arc2 }
            };
            let result = match mv {
                Move::Kink { arc, kind } => d.add_kink(arc, kind),
                Move::Poke { arc1, arc2 } => d.poke(arc1, arc2),
            };
            if let Ok(n) = result {
                next = Some((mv, n));
                break;
            }
        }
        let (mv, n) = next.ok_or_else(|| format!("no move applies to {}", d.pd()))?;
        d = n.clone();
        out.push((mv, n));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chains_are_deterministic_and_grow() {
        let d = Diagram::parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let a = random_chain(&d, 10, 7).unwrap();
        let b = random_chain(&d, 10, 7).unwrap();
        assert_eq!(a.iter().map(|p| p.0).collect::<Vec<_>>(), b.iter().map(|p| p.0).collect::<Vec<_>>());
        let last = &a.last().unwrap().1;
        assert!(last.num_crossings() > 3);
        assert_eq!(last.num_regions(), last.num_crossings() + 2);
    }

    #[test]
    fn unknot_and_unlink_start() {
        for k in [1, 2] {
            let d = Diagram::new(tribracket_core::PdCode::unlink(k).unwrap()).unwrap();
            let c = random_chain(&d, 5, 1).unwrap();
            assert_eq!(c.last().unwrap().1.num_components(), k);
        }
    }

    #[test]
    fn every_listed_poke_applies() {
        let d = Diagram::parse("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)").unwrap();
        let pairs = poke_pairs(&d);
        assert!(!pairs.is_empty());
        for (a, b) in pairs {
            d.poke(a, b).unwrap();
        }
    }
}
