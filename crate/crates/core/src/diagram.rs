//! Regions of a link diagram and the role each region plays at a crossing.
//!
//! Quadrant `q` of a crossing lies between positions `q` and `q + 1`
//! (counterclockwise). Faces are traced by leaving a crossing along an arm,
//! arriving at the far end of the arc and turning left, so every face keeps
//! its interior on the left; the corner recorded on arrival at position `p`
//! is quadrant `p - 1`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::pd::{parse_pd, PdCode, PdError, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Which quadrants fill the slots `a, b, c, d` of the crossing relation
/// `[a,b,c] = d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoleConvention {
    /// `a` left of both strands, `d` right of both, `b` across the
    /// over-strand from `a`, `c` across the under-strand.
    LeftRight,
    /// `a` between the incoming arms, `d` between the outgoing arms, `b`
    /// across the under-strand from `a`, `c` across the over-strand.
    IncomingOutgoing,
    /// As [`RoleConvention::IncomingOutgoing`] with `b` and `c` swapped at
    /// negative crossings.
    IncomingOutgoingSwapNegative,
}

/// The convention under which the counting invariant is unchanged by all
/// Reidemeister I and II moves. Pinned by tests.
pub const DEFAULT_CONVENTION: RoleConvention = RoleConvention::LeftRight;

impl RoleConvention {
    pub const ALL: [RoleConvention; 3] =
        [RoleConvention::LeftRight, RoleConvention::IncomingOutgoing, RoleConvention::IncomingOutgoingSwapNegative];

    /// Quadrants for `(a, b, c, d)`.
    pub fn quadrants(self, sign: Sign) -> [u8; 4] {
        use RoleConvention::*;
        match (self, sign) {
            (LeftRight, Sign::Positive) => [2, 3, 1, 0],
            (LeftRight, Sign::Negative) => [3, 2, 0, 1],
            (IncomingOutgoing | IncomingOutgoingSwapNegative, Sign::Positive) => [3, 0, 2, 1],
            (IncomingOutgoing, Sign::Negative) => [0, 3, 1, 2],
            (IncomingOutgoingSwapNegative, Sign::Negative) => [0, 1, 3, 2],
        }
    }
}

/// Region ids filling the four slots at one crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Roles {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Roles {
    pub fn as_array(&self) -> [usize; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Pd(#[from] PdError),
    #[error("diagram is not connected; only connected diagrams and U(k) are supported")]
    Disconnected,
    #[error("not a planar encoding: {faces} faces traced, expected {expected}")]
    NonPlanar { faces: usize, expected: usize },
}

/// An oriented arc between two crossings: leaves `tail`, enters `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub label: u32,
    pub tail: Slot,
    pub head: Slot,
}

/// A PD code with its regions, crossing signs and region roles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pd: PdCode,
    convention: RoleConvention,
    over_in: Vec<u8>,
    components: Vec<Vec<Slot>>,
    corner_region: Vec<[usize; 4]>,
    regions: Vec<Vec<Slot>>,
    roles: Vec<Roles>,
}

impl Diagram {
    pub fn new(pd: PdCode) -> Result<Self, DiagramError> {
        Self::with_convention(pd, DEFAULT_CONVENTION)
    }

    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        Self::new(parse_pd(text)?)
    }

    pub fn with_convention(pd: PdCode, convention: RoleConvention) -> Result<Self, DiagramError> {
        if pd.num_crossings() == 0 {
            let k = pd.free_loops();
            return Ok(Diagram {
                pd,
                convention,
                over_in: Vec::new(),
                components: Vec::new(),
                corner_region: Vec::new(),
                regions: vec![Vec::new(); k + 1],
                roles: Vec::new(),
            });
        }
        let partners = pd.partners();
        let n = pd.num_crossings();
        if !connected(&partners) {
            return Err(DiagramError::Disconnected);
        }
        let (corner_region, regions) = trace_faces(&partners);
        if regions.len() != n + 2 {
            return Err(DiagramError::NonPlanar { faces: regions.len(), expected: n + 2 });
        }
        let orientation = pd.orient();
        let mut d = Diagram {
            pd,
            convention,
            over_in: orientation.over_in,
            components: orientation.components,
            corner_region,
            regions,
            roles: Vec::new(),
        };
        d.roles = (0..n)
            .map(|x| {
                let [a, b, c, dd] = convention.quadrants(d.sign(x)).map(|q| d.corner_region[x][q as usize]);
                Roles { a, b, c, d: dd }
            })
            .collect();
        Ok(d)
    }

    pub fn pd(&self) -> &PdCode {
        &self.pd
    }

    pub fn convention(&self) -> RoleConvention {
        self.convention
    }

    pub fn num_crossings(&self) -> usize {
        self.pd.num_crossings()
    }

    pub fn num_regions(&self) -> usize {
        self.regions.len()
    }

    pub fn num_components(&self) -> usize {
        if self.num_crossings() == 0 {
            self.pd.free_loops()
        } else {
            self.components.len()
        }
    }

    pub fn sign(&self, x: usize) -> Sign {
        if self.over_in[x] == 3 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.num_crossings()).map(|x| self.sign(x)).collect()
    }

    pub fn writhe(&self) -> i64 {
        self.signs().iter().map(|s| s.value() as i64).sum()
    }

    pub fn roles(&self) -> &[Roles] {
        &self.roles
    }

    /// Region containing quadrant `q` of crossing `x`.
    pub fn region_at(&self, x: usize, q: u8) -> usize {
        self.corner_region[x][q as usize]
    }

    /// Each region's corners `(crossing, quadrant)` in boundary order. The
    /// regions of `U(k)` have no corners.
    pub fn regions(&self) -> &[Vec<Slot>] {
        &self.regions
    }

    /// Slot where the over-strand enters crossing `x`: 3 or 1.
    pub fn over_in(&self, x: usize) -> u8 {
        self.over_in[x]
    }

    pub fn is_in_slot(&self, (x, p): Slot) -> bool {
        p == 0 || p == self.over_in[x]
    }

    /// Per component, the slots where it enters crossings, in travel order.
    pub fn components(&self) -> &[Vec<Slot>] {
        &self.components
    }

    /// Every arc with its direction, sorted by label. Empty for `U(k)`.
    pub fn arcs(&self) -> Vec<Arc> {
        let partners = self.pd.partners();
        let mut arcs = Vec::new();
        for x in 0..self.num_crossings() {
            for p in 0..4u8 {
                if !self.is_in_slot((x, p)) {
                    arcs.push(Arc { label: self.pd.label((x, p)), tail: (x, p), head: partners[x][p as usize] });
                }
            }
        }
        arcs.sort_by_key(|a| a.label);
        arcs
    }
}

fn connected(partners: &[[Slot; 4]]) -> bool {
    let n = partners.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &partners[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn trace_faces(partners: &[[Slot; 4]]) -> (Vec<[usize; 4]>, Vec<Vec<Slot>>) {
    const UNSET: usize = usize::MAX;
    let n = partners.len();
    let mut corner_region = vec![[UNSET; 4]; n];
    let mut regions = Vec::new();
    for x in 0..n {
        for q in 0..4u8 {
            if corner_region[x][q as usize] != UNSET {
                continue;
            }
            let id = regions.len();
            let mut face = Vec::new();
            let (mut cx, mut cp) = (x, q);
            while corner_region[cx][cp as usize] == UNSET {
                corner_region[cx][cp as usize] = id;
                face.push((cx, cp));
                let (y, pp) = partners[cx][cp as usize];
                (cx, cp) = (y, (pp + 3) % 4);
            }
            regions.push(face);
        }
    }
    (corner_region, regions)
}
