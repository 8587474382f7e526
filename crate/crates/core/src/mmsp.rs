//! Multi-target monotone span programs.
//!
//! A program is a matrix G over F_q whose columns split into a secret block
//! of width x and a randomness block of width y, plus a position map
//! assigning each row to a party. A party subset's rows either span the
//! first x standard basis vectors (the subset can recover any secret), or
//! meet the span of those basis vectors only at zero (the subset learns
//! nothing), or neither. Verification checks the first condition on every
//! minimal authorized set and the second on every maximal forbidden set.
//!
//! Rejection has two equivalent formulations and both are implemented: the
//! span condition via a rank identity on the stacked matrix, and the
//! cheaper identity rank(G''_B) == rank(G_B) on the randomness block.
//! Verification always evaluates both and treats disagreement as a fatal
//! linear-algebra bug.

use serde::{Deserialize, Serialize};

use crate::access::{AccessStructure, PartySet};
use crate::error::Error;
use crate::gf::{self, FieldMatrix, FieldModulus};
use crate::subsets;
use crate::Rational;

/// Span program: matrix, column split, party map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MmspJson", into = "MmspJson")]
pub struct Mmsp {
    g: FieldMatrix,
    x: usize,
    y: usize,
    n: usize,
    tau: Vec<usize>,
}

/// Wire form:
/// `{"q":3,"x":1,"y":2,"n":3,"tau":[1,2,3,3],"g":[[0,1,2],...]}`
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MmspJson {
    q: u64,
    x: usize,
    y: usize,
    n: usize,
    tau: Vec<usize>,
    g: Vec<Vec<u64>>,
}

impl TryFrom<MmspJson> for Mmsp {
    type Error = Error;

    fn try_from(json: MmspJson) -> Result<Self, Error> {
        let modulus = FieldModulus::new(json.q)?;
        let g = FieldMatrix::from_rows(modulus, &json.g)?;
        Mmsp::new(g, json.x, json.y, json.n, json.tau)
    }
}

impl From<Mmsp> for MmspJson {
    fn from(m: Mmsp) -> MmspJson {
        MmspJson {
            q: m.g.modulus().value(),
            x: m.x,
            y: m.y,
            n: m.n,
            tau: m.tau.clone(),
            g: m.g.to_rows(),
        }
    }
}

impl Mmsp {
    /// Validates the shape contract: columns = x + y with x >= 1, one map
    /// entry per row, parties 1..=n all named at least once.
    pub fn new(g: FieldMatrix, x: usize, y: usize, n: usize, tau: Vec<usize>) -> Result<Self, Error> {
        if x == 0 {
            return Err(Error::SecretWidthZero);
        }
        if n > 64 {
            return Err(Error::TooManyParties { n });
        }
        if g.width() != x + y {
            return Err(Error::DimensionMismatch {
                context: format!("matrix width {} against split {}+{}", g.width(), x, y),
            });
        }
        if tau.len() != g.height() {
            return Err(Error::DimensionMismatch {
                context: format!("{} map entries for {} rows", tau.len(), g.height()),
            });
        }
        for &p in &tau {
            if p == 0 || p > n {
                return Err(Error::PartyOutOfRange { party: p, n });
            }
        }
        for party in 1..=n {
            if !tau.contains(&party) {
                return Err(Error::PositionMapNotSurjective { party });
            }
        }
        Ok(Mmsp { g, x, y, n, tau })
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.g
    }

    pub fn modulus(&self) -> FieldModulus {
        self.g.modulus()
    }

    /// Width of the secret block.
    pub fn secret_width(&self) -> usize {
        self.x
    }

    /// Width of the randomness block.
    pub fn randomness_width(&self) -> usize {
        self.y
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn row_count(&self) -> usize {
        self.g.height()
    }

    /// Party owning each row, 1-based.
    pub fn position_map(&self) -> &[usize] {
        &self.tau
    }

    /// First x columns (the block multiplying the secret).
    pub fn secret_part(&self) -> FieldMatrix {
        self.g.select_cols(0, self.x).expect("split validated at construction")
    }

    /// Last y columns (the block multiplying the randomness).
    pub fn randomness_part(&self) -> FieldMatrix {
        self.g.select_cols(self.x, self.x + self.y).expect("split validated at construction")
    }

    /// Share rate x / z.
    pub fn rate(&self) -> Rational {
        Rational::new(self.x as u64, self.row_count() as u64)
    }

    /// 0-based indices of rows owned by parties in the subset, ascending.
    pub fn rows_of(&self, s: &PartySet) -> Vec<usize> {
        (0..self.tau.len()).filter(|&i| s.contains(self.tau[i])).collect()
    }

    /// Submatrix of rows owned by the subset.
    pub fn rows_matrix(&self, s: &PartySet) -> FieldMatrix {
        self.g.select_rows(&self.rows_of(s)).expect("row indices from the map are in range")
    }

    fn check_subset(&self, s: &PartySet) -> Result<(), Error> {
        if !s.fits(self.n) {
            let party = *s.to_indices().last().unwrap_or(&0);
            return Err(Error::PartyOutOfRange { party, n: self.n });
        }
        Ok(())
    }

    /// Subset can recover secrets: e_1 .. e_x lie in the span of its rows.
    pub fn accepts(&self, s: &PartySet) -> Result<bool, Error> {
        self.check_subset(s)?;
        self.rows_matrix(s).rowspan_contains_basis(self.x)
    }

    /// Subset learns nothing, by the span definition: adjoining the x
    /// standard basis rows to the subset's rows raises the rank by exactly
    /// x, so the basis span meets the row span only at zero.
    pub fn rejects_definitional(&self, s: &PartySet) -> Result<bool, Error> {
        self.check_subset(s)?;
        let sub = self.rows_matrix(s);
        let modulus = self.g.modulus();
        let basis = FieldMatrix::identity(modulus, self.x)
            .hstack(&FieldMatrix::zero(modulus, self.x, self.y))?;
        let stacked = basis.vstack(&sub)?;
        Ok(stacked.rank() == self.x + sub.rank())
    }

    /// Subset learns nothing, by the rank identity: the randomness block
    /// alone already has the full rank of the subset's rows.
    pub fn rejects_rank(&self, s: &PartySet) -> Result<bool, Error> {
        self.check_subset(s)?;
        let sub = self.rows_matrix(s);
        let rand_block = sub.select_cols(self.x, self.x + self.y)?;
        Ok(rand_block.rank() == sub.rank())
    }

    /// Checks acceptance on every minimal authorized set and rejection on
    /// every maximal forbidden set. Both rejection formulations run on each
    /// forbidden set; they are provably equivalent, so disagreement panics
    /// as a fatal elimination bug rather than being reported as a verdict.
    pub fn verify(&self, structure: &AccessStructure) -> Result<MmspVerdict, Error> {
        if structure.parties() != self.n {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "structure over {} parties against program over {}",
                    structure.parties(),
                    self.n
                ),
            });
        }
        let mut failing_authorized = Vec::new();
        for a in structure.min_authorized() {
            if !self.accepts(a)? {
                failing_authorized.push(*a);
            }
        }
        let mut failing_forbidden = Vec::new();
        for b in structure.max_forbidden() {
            let by_definition = self.rejects_definitional(b)?;
            let by_rank = self.rejects_rank(b)?;
            assert_eq!(
                by_definition, by_rank,
                "rejection formulations disagree on {b}: elimination bug"
            );
            if !by_definition {
                failing_forbidden.push(*b);
            }
        }
        Ok(MmspVerdict {
            accepts_all: failing_authorized.is_empty(),
            rejects_all: failing_forbidden.is_empty(),
            failing_authorized,
            failing_forbidden,
            rate: self.rate(),
        })
    }

    /// Cross-checks the two rejection formulations on every subset of the
    /// parties. 2^n walk, capped like full enumeration.
    pub fn rejection_forms_agree(&self) -> Result<bool, Error> {
        const CAP: usize = 20;
        if self.n > CAP {
            return Err(Error::EnumerationTooLarge { n: self.n, cap: CAP });
        }
        for mask in subsets::all_masks(self.n) {
            let s = PartySet::from_mask(mask);
            if self.rejects_definitional(&s)? != self.rejects_rank(&s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Verification outcome with the offending sets spelled out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MmspVerdict {
    pub accepts_all: bool,
    pub rejects_all: bool,
    pub failing_authorized: Vec<PartySet>,
    pub failing_forbidden: Vec<PartySet>,
    #[serde(serialize_with = "crate::serde_util::ser_ratio")]
    pub rate: Rational,
}

impl MmspVerdict {
    pub fn is_valid(&self) -> bool {
        self.accepts_all && self.rejects_all
    }
}

/// Every k-row subset of `a` has rank k. Vacuously true when k exceeds the
/// row count (there are no k-subsets to fail).
pub fn is_mds_generator(a: &FieldMatrix, k: usize) -> bool {
    if k > a.height() {
        return true;
    }
    subsets::k_subset_masks(a.height(), k).into_iter().all(|mask| {
        let rows = subsets::mask_indices(mask);
        a.select_rows(&rows).expect("indices below height").rank() == k
    })
}

/// The two sides of the threshold equivalence for a candidate matrix g
/// with r columns over n = rows parties:
///
/// * left: g with the identity position map and split (r-t, t) verifies
///   against the (r, t, n) threshold structure;
/// * right: g generates an (n, r) MDS code and its last t columns generate
///   an (n, t) MDS code.
///
/// Returns (left, right); the equivalence theorem says they always match.
pub fn mds_equivalence(g: &FieldMatrix, r: usize, t: usize) -> Result<(bool, bool), Error> {
    let n = g.height();
    if g.width() != r {
        return Err(Error::DimensionMismatch {
            context: format!("matrix width {} against r={}", g.width(), r),
        });
    }
    if r > n || t >= r {
        return Err(Error::BadThreshold { r, t, n });
    }
    let structure = AccessStructure::threshold(n, r, t)?;
    let program = Mmsp::new(g.clone(), r - t, t, n, (1..=n).collect())?;
    let left = program.verify(&structure)?.is_valid();

    let rand_block = g.select_cols(r - t, r)?;
    let right = is_mds_generator(g, r) && is_mds_generator(&rand_block, t);
    Ok((left, right))
}

/// Threshold program from a Vandermonde matrix: x = r - t secret columns,
/// y = t randomness columns, one row per party (identity position map).
/// Default evaluation points are the first n powers of the field's
/// smallest generator; callers may supply their own distinct nonzero
/// points instead.
pub fn vandermonde_mmsp(
    modulus: FieldModulus,
    n: usize,
    r: usize,
    t: usize,
    points: Option<&[u64]>,
) -> Result<Mmsp, Error> {
    if r > n || t >= r {
        return Err(Error::BadThreshold { r, t, n });
    }
    let default_points;
    let points = match points {
        Some(p) => p,
        None => {
            if modulus.value() <= n as u64 {
                return Err(Error::FieldTooSmall { q: modulus.value(), n });
            }
            let g = modulus.primitive_root();
            default_points = (1..=n as u64).map(|e| modulus.pow(g, e)).collect::<Vec<_>>();
            &default_points
        }
    };
    let matrix = gf::vandermonde(modulus, n, r, points)?;
    Mmsp::new(matrix, r - t, t, n, (1..=n).collect())
}

/// Brute-force search for a program realizing the structure. Candidate
/// order is fully deterministic: row count ascending from n (position maps
/// must be surjective) to max_z, position maps lexicographic as sequences,
/// then matrix entries lexicographic over the column-major reading. Every
/// candidate pair submitted to verification consumes one unit of budget;
/// exhausting the budget before the space is an error, exhausting the
/// space is `None`.
pub fn search_mmsp(
    structure: &AccessStructure,
    modulus: FieldModulus,
    x: usize,
    y: usize,
    max_z: usize,
    budget: u64,
) -> Result<Option<Mmsp>, Error> {
    if x == 0 {
        return Err(Error::SecretWidthZero);
    }
    let n = structure.parties();
    let width = x + y;
    let q = modulus.value();
    let space = search_space_size(n, q, width, max_z);
    let mut remaining = budget;

    for z in n.max(1)..=max_z {
        let mut tau: Vec<usize> = vec![1; z];
        loop {
            if is_surjective(&tau, n) {
                // Column-major entry odometer, least significant digit last,
                // so successive candidates ascend lexicographically.
                let mut digits: Vec<u64> = vec![0; z * width];
                loop {
                    if remaining == 0 {
                        return Err(Error::BudgetExceeded { needed: space, budget });
                    }
                    remaining -= 1;
                    let candidate = matrix_from_column_major(modulus, z, width, &digits);
                    let program = Mmsp::new(candidate, x, y, n, tau.clone())?;
                    if program.verify(structure)?.is_valid() {
                        return Ok(Some(program));
                    }
                    if !increment_digits(&mut digits, q) {
                        break;
                    }
                }
            }
            if !increment_map(&mut tau, n) {
                break;
            }
        }
    }
    Ok(None)
}

fn search_space_size(n: usize, q: u64, width: usize, max_z: usize) -> u64 {
    let mut total: u64 = 0;
    for z in n.max(1)..=max_z {
        let maps = (n as u64).checked_pow(z as u32).unwrap_or(u64::MAX);
        let matrices = gf::checked_domain_size(q, z * width).unwrap_or(u64::MAX);
        total = total.saturating_add(maps.saturating_mul(matrices));
    }
    total
}

fn is_surjective(tau: &[usize], n: usize) -> bool {
    let mut mask: u64 = 0;
    for &p in tau {
        mask |= 1 << (p - 1);
    }
    mask.count_ones() as usize == n
}

/// Flattens per-party value vectors (indexed party-1, each in ascending
/// row order for that party) into one vector ordered by global row index,
/// restricted to rows owned by parties in `a`. Lengths and entry ranges
/// are validated for exactly the parties that are read.
pub(crate) fn gather_rows_by_party(
    tau: &[usize],
    n: usize,
    modulus: FieldModulus,
    a: &PartySet,
    per_party: &[Vec<u64>],
) -> Result<Vec<u64>, Error> {
    if per_party.len() != n {
        return Err(Error::DimensionMismatch {
            context: format!("{} value vectors for {} parties", per_party.len(), n),
        });
    }
    for party in a.to_indices() {
        let expected = tau.iter().filter(|&&p| p == party).count();
        if per_party[party - 1].len() != expected {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "party {} holds {} values, expected {}",
                    party,
                    per_party[party - 1].len(),
                    expected
                ),
            });
        }
        for &v in &per_party[party - 1] {
            modulus.check(v)?;
        }
    }
    let mut cursors = vec![0usize; n];
    let mut flat = Vec::new();
    for &party in tau {
        if a.contains(party) {
            flat.push(per_party[party - 1][cursors[party - 1]]);
            cursors[party - 1] += 1;
        }
    }
    Ok(flat)
}

fn matrix_from_column_major(modulus: FieldModulus, rows: usize, cols: usize, digits: &[u64]) -> FieldMatrix {
    let mut out = FieldMatrix::zero(modulus, rows, cols);
    for (pos, &d) in digits.iter().enumerate() {
        out.set(pos % rows, pos / rows, d).expect("digit below q");
    }
    out
}

fn increment_digits(digits: &mut [u64], q: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

fn increment_map(tau: &mut [usize], n: usize) -> bool {
    for t in tau.iter_mut().rev() {
        *t += 1;
        if *t <= n {
            return true;
        }
        *t = 1;
    }
    false
}
