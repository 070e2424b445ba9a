//! The dynamical partition `𝓘_n`: the first `q_{n+1}` images of
//! `I_n = [0, f^{q_n}(0)]` and the first `q_n` images of `I_{n+1}`.
//!
//! Everything is read off the lifted orbit `x_m = F^m(0) - m k`: the image
//! `f^j(I_n)` has endpoints `x_j` and `x_{j + q_n} - p_n`.

use std::fmt::Write as _;

use crate::circlemap::{CircleMap, DigitStream, OrbitOptions};
use crate::error::{Error, Result};
use crate::numerics::{convergents_u64, Real};

/// Which of the two generating intervals an atom comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orbit {
    /// Images of `I_n`.
    Long,
    /// Images of `I_{n+1}`.
    Short,
}

impl Orbit {
    pub fn label(self) -> &'static str {
        match self {
            Orbit::Long => "n",
            Orbit::Short => "n+1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<S> {
    pub orbit: Orbit,
    /// `j` in `f^j(I)`.
    pub index: u64,
    /// Left endpoint in `[0, 1)`.
    pub left: S,
    pub length: S,
}

impl<S: Real> Atom<S> {
    pub fn right(&self) -> S {
        self.left + self.length
    }

    pub fn contains(&self, x: S, tol: S) -> bool {
        x >= self.left - tol && x <= self.right() + tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition<S> {
    pub level: i64,
    /// Sorted by left endpoint.
    pub atoms: Vec<Atom<S>>,
    pub q_n: u64,
    pub q_next: u64,
}

impl<S: Real> Partition<S> {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_length(&self) -> S {
        self.atoms.iter().fold(S::zero(), |acc, a| acc + a.length)
    }

    /// Label sequence `(orbit, index)` in circular order from 0.
    pub fn labels(&self) -> Vec<(Orbit, u64)> {
        self.atoms.iter().map(|a| (a.orbit, a.index)).collect()
    }

    /// Index of the atom containing `x ∈ [0, 1)`.
    pub fn locate(&self, x: S) -> usize {
        let i = self.atoms.partition_point(|a| a.left <= x);
        i.saturating_sub(1)
    }

    /// Index of the atom of `self` containing `child`, up to `tol` at the ends.
    pub fn parent_of(&self, child: &Atom<S>, tol: S) -> Option<usize> {
        let mid = child.left + child.length * S::from_f64(0.5);
        let i = self.locate(mid);
        let p = &self.atoms[i];
        (p.contains(child.left, tol) && p.contains(child.right(), tol)).then_some(i)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,orbit,index,left,length\n");
        self.write_csv_rows(&mut s);
        s
    }

    pub fn write_csv_rows(&self, s: &mut String) {
        for a in &self.atoms {
            let _ = writeln!(s, "{},{},{},{:.17e},{:.17e}", self.level, a.orbit.label(), a.index, a.left.to_f64(), a.length.to_f64());
        }
    }
}

/// `𝓘_n` for `n >= -1`; `𝓘_{-1}` is the whole circle.
pub fn build_partition<S: Real, M: CircleMap<S> + ?Sized>(map: &M, n: i64) -> Result<Partition<S>> {
    if n < -1 {
        return Err(Error::InvalidInput(format!("partition level must be >= -1, got {n}")));
    }
    let mut stream = DigitStream::new(map, OrbitOptions::default());
    let depth = (n + 2) as usize;
    match stream.take(depth) {
        Ok(()) => {}
        Err(Error::RationalLock { digit }) => return Err(Error::DepthUnavailable { requested: depth, available: digit }),
        Err(e) => return Err(e),
    }
    let conv = convergents_u64(stream.digits()).ok_or_else(|| Error::DepthUnavailable { requested: depth, available: 0 })?;
    // conv[i] = (p_i, q_i); (p_{-1}, q_{-1}) = (1, 0).
    let (p_n, q_n) = if n == -1 { (1, 0) } else { conv[n as usize] };
    let (p_next, q_next) = conv[(n + 1) as usize];
    stream.ensure_orbit((q_n + q_next) as usize)?;
    let x = stream.orbit();

    let mut atoms = Vec::with_capacity((q_n + q_next) as usize);
    let mut push = |orbit: Orbit, j: u64, q: u64, p: u64| {
        let a = x[j as usize];
        let b = x[(j + q) as usize] - S::from_u64(p);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let left = lo - lo.floor();
        atoms.push(Atom { orbit, index: j, left, length: hi - lo });
    };
    for j in 0..q_next {
        push(Orbit::Long, j, q_n, p_n);
    }
    for j in 0..q_n {
        push(Orbit::Short, j, q_next, p_next);
    }
    atoms.sort_by(|a, b| a.left.partial_cmp(&b.left).unwrap());

    let tol = S::epsilon() * S::from_f64(10.0);
    for (i, a) in atoms.iter().enumerate() {
        let next_left = atoms.get(i + 1).map_or(S::one(), |b| b.left);
        if a.length <= tol || (a.right() - next_left).abs() > tol * S::from_f64(1e3) * S::from_u64(q_n + q_next) {
            return Err(Error::PrecisionExhausted(format!(
                "level-{n} atom {} of orbit {} is degenerate or misplaced",
                a.index,
                a.orbit.label()
            )));
        }
    }
    Ok(Partition { level: n, atoms, q_n, q_next })
}
