//! Reidemeister I and II rewrites, mirror image and orientation reversal.
//!
//! Moves work on an oriented wiring (which out-slot feeds which in-slot) and
//! rebuild the diagram with canonical labels: consecutive along each
//! component, components ordered by their smallest entry slot, each starting
//! on the arc that enters that slot.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Sign};
use crate::pd::{PdCode, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KinkKind {
    /// The strand passes under first, then loops back over itself.
    UnderFirstPositive,
    UnderFirstNegative,
    /// The strand passes over first, then loops back under itself.
    OverFirstPositive,
    OverFirstNegative,
}

impl KinkKind {
    pub const ALL: [KinkKind; 4] = [
        KinkKind::UnderFirstPositive,
        KinkKind::UnderFirstNegative,
        KinkKind::OverFirstPositive,
        KinkKind::OverFirstNegative,
    ];

    pub fn sign(self) -> Sign {
        match self {
            KinkKind::UnderFirstPositive | KinkKind::OverFirstPositive => Sign::Positive,
            KinkKind::UnderFirstNegative | KinkKind::OverFirstNegative => Sign::Negative,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("no arc labelled {0}")]
    NoSuchArc(u32),
    #[error("no crossing {0}")]
    NoSuchCrossing(usize),
    #[error("crossing {0} is not a removable kink")]
    NotAKink(usize),
    #[error("arcs {0} and {1} do not border a common region")]
    NoCommonRegion(u32, u32),
    #[error("cannot poke arc {0} across itself")]
    SameArc(u32),
    #[error("move would leave a disconnected diagram")]
    Disconnected,
    #[error("expected {expected} component flags, got {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Crossings given by where their over-strand enters, plus the arcs as
/// `(out-slot, in-slot)` pairs.
#[derive(Debug, Clone)]
struct Wiring {
    over_in: Vec<u8>,
    arcs: Vec<(Slot, Slot)>,
}

impl Wiring {
    fn of(d: &Diagram) -> Self {
        let over_in = (0..d.num_crossings()).map(|x| d.over_in(x)).collect();
        Wiring { over_in, arcs: d.arcs().iter().map(|a| (a.tail, a.head)).collect() }
    }

    fn arc_of(d: &Diagram, label: u32) -> Result<(Slot, Slot), MoveError> {
        d.arcs().iter().find(|a| a.label == label).map(|a| (a.tail, a.head)).ok_or(MoveError::NoSuchArc(label))
    }

    fn remove_arc(&mut self, arc: (Slot, Slot)) {
        let i = self.arcs.iter().position(|&a| a == arc).expect("arc present");
        self.arcs.swap_remove(i);
    }

    fn add_crossing(&mut self, over_in: u8) -> usize {
        self.over_in.push(over_in);
        self.over_in.len() - 1
    }

    /// Canonical relabelling into a diagram with the given convention.
    fn build(&self, template: &Diagram) -> Result<Diagram, MoveError> {
        let n = self.over_in.len();
        let mut next = vec![[None; 4]; n];
        let mut prev = vec![[None; 4]; n];
        for &(o, i) in &self.arcs {
            next[o.0][o.1 as usize] = Some(i);
            prev[i.0][i.1 as usize] = Some(o);
        }
        let mut labels = vec![[0u32; 4]; n];
        let mut done = vec![[false; 4]; n];
        let mut label = 0u32;
        // In-slots in order: each unvisited one starts a new component.
        let mut ins: Vec<Slot> = (0..n).flat_map(|x| [(x, 0u8), (x, self.over_in[x])]).collect();
        ins.sort_unstable();
        for start in ins {
            if done[start.0][start.1 as usize] {
                continue;
            }
            let mut cur = start;
            while !done[cur.0][cur.1 as usize] {
                label += 1;
                done[cur.0][cur.1 as usize] = true;
                let from = prev[cur.0][cur.1 as usize].expect("every in-slot is fed");
                labels[cur.0][cur.1 as usize] = label;
                labels[from.0][from.1 as usize] = label;
                let out = (cur.0, (cur.1 + 2) % 4);
                cur = next[out.0][out.1 as usize].expect("every out-slot feeds an arc");
            }
        }
        let pd = PdCode::new(labels).map_err(DiagramError::from)?;
        Ok(Diagram::with_convention(pd, template.convention())?)
    }
}

fn crossingless(d: &Diagram, loops: usize) -> Diagram {
    Diagram::with_convention(PdCode::unlink(loops).expect("at least one loop"), d.convention())
        .expect("unlinks always build")
}

impl Diagram {
    /// Adds a Reidemeister I curl on `arc`. On `U(1)` the only arc is `1`.
    pub fn add_kink(&self, arc: u32, kind: KinkKind) -> Result<Diagram, MoveError> {
        let (mut w, ends) = if self.num_crossings() == 0 {
            match self.pd().free_loops() {
                1 if arc == 1 => (Wiring { over_in: Vec::new(), arcs: Vec::new() }, None),
                1 => return Err(MoveError::NoSuchArc(arc)),
                _ => return Err(MoveError::Disconnected),
            }
        } else {
            let ends = Wiring::arc_of(self, arc)?;
            let mut w = Wiring::of(self);
            w.remove_arc(ends);
            (w, Some(ends))
        };
        let over_in = if kind.sign() == Sign::Positive { 3 } else { 1 };
        let z = w.add_crossing(over_in);
        // (entry slot, internal arc, exit slot)
        let (entry, inner, exit) = match kind {
            KinkKind::UnderFirstPositive => ((z, 0), ((z, 2), (z, 3)), (z, 1)),
            KinkKind::UnderFirstNegative => ((z, 0), ((z, 2), (z, 1)), (z, 3)),
            KinkKind::OverFirstPositive => ((z, 3), ((z, 1), (z, 0)), (z, 2)),
            KinkKind::OverFirstNegative => ((z, 1), ((z, 3), (z, 0)), (z, 2)),
        };
        w.arcs.push(inner);
        match ends {
            Some((tail, head)) => {
                w.arcs.push((tail, entry));
                w.arcs.push((exit, head));
            }
            None => w.arcs.push((exit, entry)),
        }
        w.build(self)
    }

    /// Removes a Reidemeister I curl at crossing `x`.
    pub fn remove_kink(&self, x: usize) -> Result<Diagram, MoveError> {
        let n = self.num_crossings();
        if x >= n {
            return Err(MoveError::NoSuchCrossing(x));
        }
        let w = Wiring::of(self);
        let loop_arc = w.arcs.iter().copied().find(|&(o, i)| o.0 == x && i.0 == x && (o.1 + 4 - i.1) % 2 == 1);
        let Some(loop_arc) = loop_arc else {
            return Err(MoveError::NotAKink(x));
        };
        let other_in = [0u8, self.over_in(x)].into_iter().find(|&p| p != loop_arc.1 .1).expect("two in-slots");
        let other_out =
            [2u8, (self.over_in(x) + 2) % 4].into_iter().find(|&p| p != loop_arc.0 .1).expect("two out-slots");
        let feeding = w.arcs.iter().copied().find(|&(_, i)| i == (x, other_in)).expect("fed");
        let leaving = w.arcs.iter().copied().find(|&(o, _)| o == (x, other_out)).expect("feeds");
        if feeding == ((x, other_out), (x, other_in)) {
            return if n == 1 { Ok(crossingless(self, 1)) } else { Err(MoveError::Disconnected) };
        }
        let renumber = |(y, p): Slot| (if y > x { y - 1 } else { y }, p);
        let mut arcs: Vec<(Slot, Slot)> = w
            .arcs
            .iter()
            .copied()
            .filter(|&a| a != loop_arc && a != feeding && a != leaving)
            .map(|(o, i)| (renumber(o), renumber(i)))
            .collect();
        arcs.push((renumber(feeding.0), renumber(leaving.1)));
        let mut over_in = w.over_in;
        over_in.remove(x);
        Wiring { over_in, arcs }.build(self)
    }

    /// Reidemeister II: pushes a finger of `arc1` over `arc2` across a region
    /// they both border. On `U(1)` use `poke(1, 1)`; on `U(2)`, `poke(1, 2)`.
    pub fn poke(&self, arc1: u32, arc2: u32) -> Result<Diagram, MoveError> {
        if self.num_crossings() == 0 {
            let k = self.pd().free_loops() as u32;
            for a in [arc1, arc2] {
                if a == 0 || a > k {
                    return Err(MoveError::NoSuchArc(a));
                }
            }
            return match (k, arc1 == arc2) {
                (1, true) => Ok(build_poke(self, Vec::new(), Vec::new(), (None, 1), (None, 1), true)?),
                (2, false) => Ok(build_poke(self, Vec::new(), Vec::new(), (None, 1), (None, 1), false)?),
                (2, true) => Err(MoveError::SameArc(arc1)),
                _ => Err(MoveError::Disconnected),
            };
        }
        let e1 = Wiring::arc_of(self, arc1)?;
        let e2 = Wiring::arc_of(self, arc2)?;
        if arc1 == arc2 {
            return Err(MoveError::SameArc(arc1));
        }
        // The region left of an arc traversed forward is the corner at its
        // tail; traversed backward, the corner at its head.
        let sides = |(tail, head): (Slot, Slot)| {
            [(self.region_at(tail.0, tail.1), 1i8), (self.region_at(head.0, head.1), -1i8)]
        };
        let choice = sides(e1)
            .into_iter()
            .flat_map(|(r1, t1)| sides(e2).into_iter().map(move |(r2, t2)| (r1, t1, r2, t2)))
            .find(|&(r1, _, r2, _)| r1 == r2);
        let Some((_, t1, _, t2)) = choice else {
            return Err(MoveError::NoCommonRegion(arc1, arc2));
        };
        let mut w = Wiring::of(self);
        w.remove_arc(e1);
        w.remove_arc(e2);
        build_poke(self, w.over_in, w.arcs, (Some(e1), t1), (Some(e2), t2), false)
    }

    /// The mirror image: reflecting the plane reverses the cyclic order at
    /// every crossing, which swaps positions 1 and 3.
    pub fn mirror(&self) -> Diagram {
        if self.num_crossings() == 0 {
            return self.clone();
        }
        let flip = |(x, p): Slot| (x, (4 - p) % 4);
        let w = Wiring::of(self);
        let over_in = w.over_in.iter().map(|&p| (4 - p) % 4).collect();
        let arcs = w.arcs.iter().map(|&(o, i)| (flip(o), flip(i))).collect();
        Wiring { over_in, arcs }.build(self).expect("mirror of a valid diagram is valid")
    }

    /// Reverses the orientation of every component whose flag is set;
    /// flags follow the order of [`Diagram::components`].
    pub fn reverse_components(&self, flags: &[bool]) -> Result<Diagram, MoveError> {
        if self.num_crossings() == 0 {
            return Ok(self.clone());
        }
        let comps = self.components();
        if flags.len() != comps.len() {
            return Err(MoveError::ComponentCount { expected: comps.len(), found: flags.len() });
        }
        let n = self.num_crossings();
        // Which strands (under, over) at each crossing get reversed.
        let mut rev = vec![[false; 2]; n];
        for (comp, &flag) in comps.iter().zip(flags) {
            for &(x, p) in comp {
                rev[x][(p % 2) as usize] = flag;
            }
        }
        let rot = |(x, p): Slot| if rev[x][0] { (x, (p + 2) % 4) } else { (x, p) };
        let strand_reversed = |(x, p): Slot| rev[x][(p % 2) as usize];
        let over_in = (0..n)
            .map(|x| {
                let ov = self.over_in(x);
                let ov = if rev[x][1] { (ov + 2) % 4 } else { ov };
                rot((x, ov)).1
            })
            .collect();
        let arcs = Wiring::of(self)
            .arcs
            .iter()
            .map(|&(o, i)| if strand_reversed(o) { (rot(i), rot(o)) } else { (rot(o), rot(i)) })
            .collect();
        Wiring { over_in, arcs }.build(self)
    }

    /// The diagram with every label replaced canonically; equal diagrams up
    /// to relabelling compare equal afterwards.
    pub fn canonical(&self) -> Diagram {
        if self.num_crossings() == 0 {
            return self.clone();
        }
        Wiring::of(self).build(self).expect("relabelling a valid diagram")
    }
}

/// Position of a compass direction at a new crossing whose under-strand runs
/// west when `t2 > 0` and east otherwise.
fn compass(t2: i8, dir: char) -> u8 {
    let order: [char; 4] = if t2 > 0 { ['E', 'N', 'W', 'S'] } else { ['W', 'S', 'E', 'N'] };
    order.iter().position(|&c| c == dir).expect("compass point") as u8
}

/// Geometry: the common region lies below the horizontal `arc2`, whose
/// boundary traversal runs west; the finger of `arc1` rises through it and
/// crosses `arc2` at `P` (west) and `Q` (east). `t` is +1 when the arc's
/// orientation agrees with the traversal. Loops (`None` ends) close on
/// themselves, or onto each other when `joined`.
fn build_poke(
    template: &Diagram,
    mut over_in: Vec<u8>,
    mut arcs: Vec<(Slot, Slot)>,
    (ends1, t1): (Option<(Slot, Slot)>, i8),
    (ends2, t2): (Option<(Slot, Slot)>, i8),
    joined: bool,
) -> Result<Diagram, MoveError> {
    let (p, q) = (over_in.len(), over_in.len() + 1);
    let north_at = |k: usize| (k == p) == (t1 > 0);
    let over = |k: usize| -> (Slot, Slot) {
        let (i, o) = if north_at(k) { ('S', 'N') } else { ('N', 'S') };
        ((k, compass(t2, i)), (k, compass(t2, o)))
    };
    over_in.push(over(p).0 .1);
    over_in.push(over(q).0 .1);
    let (first1, second1) = if t1 > 0 { (p, q) } else { (q, p) };
    let (first2, second2) = if t2 > 0 { (q, p) } else { (p, q) };
    let (in1, mid1_out, mid1_in, out1) = (over(first1).0, over(first1).1, over(second1).0, over(second1).1);
    let (in2, out2) = ((first2, 0u8), (second2, 2u8));
    arcs.push((mid1_out, mid1_in));
    arcs.push(((first2, 2), (second2, 0)));
    match (ends1, ends2) {
        (Some((t1s, h1)), Some((t2s, h2))) => {
            arcs.extend([(t1s, in1), (out1, h1), (t2s, in2), (out2, h2)]);
        }
        (None, None) if joined => arcs.extend([(out1, in2), (out2, in1)]),
        (None, None) => arcs.extend([(out1, in1), (out2, in2)]),
        _ => unreachable!("both arcs are loops or neither is"),
    }
    Wiring { over_in, arcs }.build(template)
}
