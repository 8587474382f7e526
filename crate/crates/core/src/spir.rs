//! Projected linear symmetric PIR and the conversion triangle.
//!
//! A projected linear protocol is a triplet (H, J, tau): J selects the
//! wanted file block inside the query, H masks the query with user
//! randomness and masks the answers with server-shared randomness. For a
//! file index k, the user sends each server its rows of
//!
//! ```text
//! Q = J * E_k + H * R
//! ```
//!
//! where E_k drops an identity block at file k and R is uniform. Server j
//! returns D_j = Q_j * M + T_j with T = H * W for the shared seed W. The
//! answers collectively equal (J | H)_rows * (M_k ; R*M + W), which is the
//! share identity of the underlying span program: whatever the program
//! accepts can reconstruct M_k, whatever it rejects sees noise.
//!
//! Conversions: a span program splits into (H, J, tau) for any file count
//! f >= 2; any linear protocol flattens back to a secret-sharing encoder
//! (Q' | H) from its k=1, zero-randomness query; and projection rebuilds
//! the canonical triplet from the same prefix. Round trips are exact.
//!
//! The [`EnumerableSpir`] interface exposes a protocol's finite domains as
//! plain integers so the audit module can sweep them exhaustively; any
//! protocol implementing it (linear or not) can be audited and can host
//! the dealer-constant search used when flattening leaky protocols.

use serde::{Deserialize, Serialize};

use crate::access::{AccessStructure, PartySet};
use crate::audit::JointPmf;
use crate::error::Error;
use crate::gf::{self, FieldMatrix, FieldModulus};
use crate::mmsp::{self, Mmsp};
use crate::nss::LinearNss;
use crate::Rational;

/// A linear protocol that can expose its query as a matrix. Everything a
/// flattening or projection needs: dimensions, the masking matrix H, and
/// the query map.
pub trait LinearSpirEncoding {
    fn modulus(&self) -> FieldModulus;
    /// Width x of one file block.
    fn secret_width(&self) -> usize;
    /// Width y of the randomness block.
    fn randomness_width(&self) -> usize;
    fn parties(&self) -> usize;
    fn file_count(&self) -> usize;
    fn position_map(&self) -> &[usize];
    /// The masking matrix H (rows x y).
    fn randomness_encoder(&self) -> FieldMatrix;
    /// Full query matrix (rows x f*x) for file k and user randomness R
    /// (y x f*x).
    fn query_matrix(&self, k: usize, user_rand: &FieldMatrix) -> Result<FieldMatrix, Error>;
}

/// A protocol whose randomness, seed, and message domains are small enough
/// to enumerate. Values are plain indices: file symbols in
/// 0..message_space, user randomness in 0..user_rand_space, seeds in
/// 0..seed_space; queries and answers are opaque per-server symbols.
/// Implementations report domains too large to encode as
/// [`Error::SymbolOverflow`], which audits surface before enumerating.
pub trait EnumerableSpir {
    fn servers(&self) -> usize;
    fn file_count(&self) -> usize;
    /// Number of possible values of one file.
    fn message_space(&self) -> Result<u64, Error>;
    /// Number of possible user-randomness draws.
    fn user_rand_space(&self) -> Result<u64, Error>;
    /// Number of possible server-shared seeds.
    fn seed_space(&self) -> Result<u64, Error>;
    /// Per-server query symbols for file k under user randomness r.
    fn query_symbols(&self, k: usize, r: u64) -> Result<Vec<u64>, Error>;
    /// Server's answer symbol given its query symbol, all files, and the
    /// shared seed.
    fn answer_symbol(&self, server: usize, query: u64, files: &[u64], seed: u64)
        -> Result<u64, Error>;
    /// (download rate, shared-randomness rate) when the protocol is linear
    /// with known widths; audits attach these to reports.
    fn linear_rates(&self) -> Option<(Rational, Rational)> {
        None
    }
}

/// Projected linear protocol (H, J, tau) for f files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpirJson", into = "SpirJson")]
pub struct ProjectedLinearSpir {
    h: FieldMatrix,
    j: FieldMatrix,
    tau: Vec<usize>,
    n: usize,
    f: usize,
}

/// Wire form:
/// `{"kind":"spir","q":3,"x":1,"y":2,"n":3,"f":2,"tau":[...],"h":[[...]],"j":[[...]]}`
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpirJson {
    kind: String,
    q: u64,
    x: usize,
    y: usize,
    n: usize,
    f: usize,
    tau: Vec<usize>,
    h: Vec<Vec<u64>>,
    j: Vec<Vec<u64>>,
}

impl TryFrom<SpirJson> for ProjectedLinearSpir {
    type Error = Error;

    fn try_from(json: SpirJson) -> Result<Self, Error> {
        if json.kind != "spir" {
            return Err(Error::WrongKind { expected: "spir", found: json.kind });
        }
        let modulus = FieldModulus::new(json.q)?;
        let mut h = FieldMatrix::from_rows(modulus, &json.h)?;
        let j = FieldMatrix::from_rows(modulus, &json.j)?;
        // A zero-width randomness block serializes as rows of empty lists;
        // json.h == [] is the same protocol when y = 0.
        if json.y == 0 && h.height() == 0 {
            h = FieldMatrix::zero(modulus, j.height(), 0);
        }
        if h.width() != json.y || j.width() != json.x {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "declared split {}+{} against matrices of widths {} and {}",
                    json.x,
                    json.y,
                    j.width(),
                    h.width()
                ),
            });
        }
        ProjectedLinearSpir::new(h, j, json.tau, json.n, json.f)
    }
}

impl From<ProjectedLinearSpir> for SpirJson {
    fn from(p: ProjectedLinearSpir) -> SpirJson {
        SpirJson {
            kind: "spir".to_string(),
            q: p.modulus().value(),
            x: p.secret_width(),
            y: p.randomness_width(),
            n: p.n,
            f: p.f,
            tau: p.tau.clone(),
            h: p.h.to_rows(),
            j: p.j.to_rows(),
        }
    }
}

impl ProjectedLinearSpir {
    /// Validates the triplet: matching heights and moduli, f >= 2, and the
    /// same position-map contract as span programs.
    pub fn new(
        h: FieldMatrix,
        j: FieldMatrix,
        tau: Vec<usize>,
        n: usize,
        f: usize,
    ) -> Result<Self, Error> {
        if f < 2 {
            return Err(Error::FileCountTooSmall { f });
        }
        if h.height() != j.height() {
            return Err(Error::DimensionMismatch {
                context: format!("H has {} rows, J has {}", h.height(), j.height()),
            });
        }
        // The combined program constructor enforces the remaining shape
        // contract (modulus match, x >= 1, map surjectivity).
        let combined = j.hstack(&h)?;
        Mmsp::new(combined, j.width(), h.width(), n, tau.clone())?;
        Ok(ProjectedLinearSpir { h, j, tau, n, f })
    }

    pub fn modulus(&self) -> FieldModulus {
        self.j.modulus()
    }

    /// Width x of one file block.
    pub fn secret_width(&self) -> usize {
        self.j.width()
    }

    /// Width y of the randomness block.
    pub fn randomness_width(&self) -> usize {
        self.h.width()
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn file_count(&self) -> usize {
        self.f
    }

    pub fn row_count(&self) -> usize {
        self.j.height()
    }

    pub fn position_map(&self) -> &[usize] {
        &self.tau
    }

    /// The masking matrix H.
    pub fn randomness_part(&self) -> &FieldMatrix {
        &self.h
    }

    /// The selection matrix J.
    pub fn secret_part(&self) -> &FieldMatrix {
        &self.j
    }

    /// Download rate x / z.
    pub fn rate(&self) -> Rational {
        Rational::new(self.secret_width() as u64, self.row_count() as u64)
    }

    /// Shared-randomness rate y / x.
    pub fn randomness_rate(&self) -> Rational {
        Rational::new(self.randomness_width() as u64, self.secret_width() as u64)
    }

    /// The combined encoder (J | H).
    pub fn combined_matrix(&self) -> FieldMatrix {
        self.j.hstack(&self.h).expect("heights validated at construction")
    }

    /// The underlying span program.
    pub fn to_program(&self) -> Mmsp {
        Mmsp::new(
            self.combined_matrix(),
            self.secret_width(),
            self.randomness_width(),
            self.n,
            self.tau.clone(),
        )
        .expect("validated at construction")
    }

    /// 0-based row indices owned by one server.
    pub fn rows_of_server(&self, server: usize) -> Vec<usize> {
        (0..self.tau.len()).filter(|&i| self.tau[i] == server).collect()
    }

    fn check_file_index(&self, k: usize) -> Result<(), Error> {
        if k == 0 || k > self.f {
            return Err(Error::IndexOutOfRange {
                context: format!("file {} of {}", k, self.f),
            });
        }
        Ok(())
    }

    /// Selector E_k (x rows, f*x columns): identity at block k, zero
    /// elsewhere.
    pub fn selector(&self, k: usize) -> Result<FieldMatrix, Error> {
        self.check_file_index(k)?;
        let x = self.secret_width();
        let mut e = FieldMatrix::zero(self.modulus(), x, self.f * x);
        for i in 0..x {
            e.set(i, (k - 1) * x + i, 1)?;
        }
        Ok(e)
    }

    /// Full query matrix Q = J * E_k + H * R for user randomness R
    /// (y rows, f*x columns).
    pub fn full_query(&self, k: usize, user_rand: &FieldMatrix) -> Result<FieldMatrix, Error> {
        let (y, fx) = (self.randomness_width(), self.f * self.secret_width());
        if user_rand.height() != y || user_rand.width() != fx {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "user randomness {}x{} against required {}x{}",
                    user_rand.height(),
                    user_rand.width(),
                    y,
                    fx
                ),
            });
        }
        let selected = self.j.mat_mul(&self.selector(k)?)?;
        let masked = self.h.mat_mul(user_rand)?;
        add_matrices(&selected, &masked)
    }

    /// Per-server query matrices, index j-1 for server j.
    pub fn make_query(
        &self,
        k: usize,
        user_rand: &FieldMatrix,
    ) -> Result<Vec<FieldMatrix>, Error> {
        let q = self.full_query(k, user_rand)?;
        (1..=self.n)
            .map(|server| q.select_rows(&self.rows_of_server(server)))
            .collect()
    }

    /// Server-side evaluation: D_j = Q_j * M + T_j with T = H * W. `files`
    /// is the stacked file vector (length f*x), `seed` the shared seed W
    /// (length y).
    pub fn answer(
        &self,
        server: usize,
        query_rows: &FieldMatrix,
        files: &[u64],
        seed: &[u64],
    ) -> Result<Vec<u64>, Error> {
        if server == 0 || server > self.n {
            return Err(Error::IndexOutOfRange {
                context: format!("server {} of {}", server, self.n),
            });
        }
        let rows = self.rows_of_server(server);
        let fx = self.f * self.secret_width();
        if query_rows.height() != rows.len() || query_rows.width() != fx {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "query {}x{} against server {} holding {} rows of width {}",
                    query_rows.height(),
                    query_rows.width(),
                    server,
                    rows.len(),
                    fx
                ),
            });
        }
        if files.len() != fx {
            return Err(Error::DimensionMismatch {
                context: format!("file vector length {} against {}", files.len(), fx),
            });
        }
        if seed.len() != self.randomness_width() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "seed length {} against {}",
                    seed.len(),
                    self.randomness_width()
                ),
            });
        }
        for &v in files.iter().chain(seed) {
            self.modulus().check(v)?;
        }
        let mask = self.h.select_rows(&rows)?.mul_vec(seed)?;
        let payload = query_rows.mul_vec(files)?;
        let q = self.modulus();
        Ok(payload.iter().zip(&mask).map(|(&p, &t)| q.add(p, t)).collect())
    }

    /// Left inverse K with K * (J | H)_rows(a) = (I_x | 0), if the subset's
    /// rows span the basis block. Reconstruction is K times the subset's
    /// stacked answers; sweeps hoist this out of their inner loops.
    pub fn reconstruction_matrix(&self, a: &PartySet) -> Result<Option<FieldMatrix>, Error> {
        if !a.fits(self.n) {
            let party = *a.to_indices().last().unwrap_or(&0);
            return Err(Error::PartyOutOfRange { party, n: self.n });
        }
        let rows: Vec<usize> =
            (0..self.tau.len()).filter(|&i| a.contains(self.tau[i])).collect();
        let sub = self.combined_matrix().select_rows(&rows)?;
        let mut k_rows = Vec::with_capacity(self.secret_width());
        for i in 0..self.secret_width() {
            let mut e = vec![0; sub.width()];
            e[i] = 1;
            match sub.solve_left(&e)? {
                Some(row) => k_rows.push(row),
                None => return Ok(None),
            }
        }
        Ok(Some(FieldMatrix::from_rows(self.modulus(), &k_rows)?))
    }

    /// Recovers file k from the answers of parties in `a` (indexed
    /// party-1; other entries are never read). `None` means the subset
    /// cannot reconstruct.
    pub fn reconstruct_file(
        &self,
        a: &PartySet,
        answers: &[Vec<u64>],
        k: usize,
    ) -> Result<Option<Vec<u64>>, Error> {
        self.check_file_index(k)?;
        let Some(kmat) = self.reconstruction_matrix(a)? else {
            return Ok(None);
        };
        let flat = mmsp::gather_rows_by_party(&self.tau, self.n, self.modulus(), a, answers)?;
        Ok(Some(kmat.mul_vec(&flat)?))
    }

    /// One honest end-to-end run over every server, reconstructing from
    /// the full party set.
    pub fn transcript(
        &self,
        k: usize,
        user_rand: &FieldMatrix,
        files: &[u64],
        seed: &[u64],
    ) -> Result<SpirTranscript, Error> {
        let queries = self.make_query(k, user_rand)?;
        let mut answers = Vec::with_capacity(self.n);
        for server in 1..=self.n {
            answers.push(self.answer(server, &queries[server - 1], files, seed)?);
        }
        let full = PartySet::full(self.n)?;
        let reconstructed = self.reconstruct_file(&full, &answers, k)?;
        Ok(SpirTranscript {
            k,
            user_rand: user_rand.clone(),
            shared_seed: seed.to_vec(),
            queries,
            answers,
            reconstructed,
        })
    }
}

fn add_matrices(a: &FieldMatrix, b: &FieldMatrix) -> Result<FieldMatrix, Error> {
    if a.height() != b.height() || a.width() != b.width() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "sum of {}x{} and {}x{}",
                a.height(),
                a.width(),
                b.height(),
                b.width()
            ),
        });
    }
    let q = a.modulus();
    let mut out = FieldMatrix::zero(q, a.height(), a.width());
    for r in 0..a.height() {
        for c in 0..a.width() {
            out.set(r, c, q.add(a.get(r, c), b.get(r, c)))?;
        }
    }
    Ok(out)
}

/// Full record of one honest protocol run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpirTranscript {
    pub k: usize,
    pub user_rand: FieldMatrix,
    pub shared_seed: Vec<u64>,
    pub queries: Vec<FieldMatrix>,
    pub answers: Vec<Vec<u64>>,
    pub reconstructed: Option<Vec<u64>>,
}

impl LinearSpirEncoding for ProjectedLinearSpir {
    fn modulus(&self) -> FieldModulus {
        self.j.modulus()
    }

    fn secret_width(&self) -> usize {
        self.j.width()
    }

    fn randomness_width(&self) -> usize {
        self.h.width()
    }

    fn parties(&self) -> usize {
        self.n
    }

    fn file_count(&self) -> usize {
        self.f
    }

    fn position_map(&self) -> &[usize] {
        &self.tau
    }

    fn randomness_encoder(&self) -> FieldMatrix {
        self.h.clone()
    }

    fn query_matrix(&self, k: usize, user_rand: &FieldMatrix) -> Result<FieldMatrix, Error> {
        self.full_query(k, user_rand)
    }
}

/// Splits a span program into a PIR protocol for f >= 2 files: H is the
/// randomness block, J the secret block, same position map. The download
/// rate is the program's share rate for every f.
pub fn mmsp_to_spir(m: &Mmsp, f: usize) -> Result<ProjectedLinearSpir, Error> {
    ProjectedLinearSpir::new(
        m.randomness_part(),
        m.secret_part(),
        m.position_map().to_vec(),
        m.parties(),
        f,
    )
}

/// Flattens a linear protocol into a secret-sharing scheme by simulating
/// one run: the encoder is (Q' | H) where Q' is the first file block of
/// the k=1 query at zero user randomness. For projected protocols Q' = J,
/// so the round trip through the span program is exact.
pub fn spir_to_nss(p: &impl LinearSpirEncoding) -> Result<LinearNss, Error> {
    let prefix = zero_rand_query_prefix(p)?;
    let encoder = prefix.hstack(&p.randomness_encoder())?;
    LinearNss::new(
        encoder,
        p.secret_width(),
        p.randomness_width(),
        p.parties(),
        p.position_map().to_vec(),
    )
}

/// Canonical triplet (H, Q', tau) of a linear protocol, from the same
/// k=1 zero-randomness query prefix as the flattening. Idempotent on
/// projected protocols.
pub fn project(p: &impl LinearSpirEncoding) -> Result<ProjectedLinearSpir, Error> {
    let prefix = zero_rand_query_prefix(p)?;
    ProjectedLinearSpir::new(
        p.randomness_encoder(),
        prefix,
        p.position_map().to_vec(),
        p.parties(),
        p.file_count(),
    )
}

fn zero_rand_query_prefix(p: &impl LinearSpirEncoding) -> Result<FieldMatrix, Error> {
    let zero = FieldMatrix::zero(
        p.modulus(),
        p.randomness_width(),
        p.file_count() * p.secret_width(),
    );
    let q = p.query_matrix(1, &zero)?;
    q.select_cols(0, p.secret_width())
}

impl EnumerableSpir for ProjectedLinearSpir {
    fn servers(&self) -> usize {
        self.n
    }

    fn file_count(&self) -> usize {
        self.f
    }

    fn message_space(&self) -> Result<u64, Error> {
        domain(self.modulus().value(), self.secret_width())
    }

    fn user_rand_space(&self) -> Result<u64, Error> {
        domain(self.modulus().value(), self.randomness_width() * self.f * self.secret_width())
    }

    fn seed_space(&self) -> Result<u64, Error> {
        domain(self.modulus().value(), self.randomness_width())
    }

    fn query_symbols(&self, k: usize, r: u64) -> Result<Vec<u64>, Error> {
        let q = self.modulus().value();
        let (y, fx) = (self.randomness_width(), self.f * self.secret_width());
        let digits = gf::decode_base_q(q, y * fx, r);
        let rows: Vec<Vec<u64>> = digits.chunks(fx.max(1)).map(<[u64]>::to_vec).collect();
        let user_rand = if y == 0 {
            FieldMatrix::zero(self.modulus(), 0, fx)
        } else {
            FieldMatrix::from_rows(self.modulus(), &rows)?
        };
        let full = self.full_query(k, &user_rand)?;
        let mut symbols = Vec::with_capacity(self.n);
        for server in 1..=self.n {
            let sub = full.select_rows(&self.rows_of_server(server))?;
            let flat: Vec<u64> = sub.to_rows().into_iter().flatten().collect();
            symbols.push(gf::encode_base_q(q, &flat)?);
        }
        Ok(symbols)
    }

    fn answer_symbol(
        &self,
        server: usize,
        query: u64,
        files: &[u64],
        seed: u64,
    ) -> Result<u64, Error> {
        let q = self.modulus().value();
        let fx = self.f * self.secret_width();
        let row_count = self.rows_of_server(server).len();
        let digits = gf::decode_base_q(q, row_count * fx, query);
        let rows: Vec<Vec<u64>> = digits.chunks(fx.max(1)).map(<[u64]>::to_vec).collect();
        let query_rows = if row_count == 0 {
            FieldMatrix::zero(self.modulus(), 0, fx)
        } else {
            FieldMatrix::from_rows(self.modulus(), &rows)?
        };
        let mut file_vec = Vec::with_capacity(fx);
        for &file in files {
            file_vec.extend(gf::decode_base_q(q, self.secret_width(), file));
        }
        let seed_vec = gf::decode_base_q(q, self.randomness_width(), seed);
        let d = self.answer(server, &query_rows, &file_vec, &seed_vec)?;
        gf::encode_base_q(q, &d)
    }

    fn linear_rates(&self) -> Option<(Rational, Rational)> {
        Some((self.rate(), self.randomness_rate()))
    }
}

fn domain(q: u64, len: usize) -> Result<u64, Error> {
    gf::checked_domain_size(q, len).ok_or_else(|| Error::SymbolOverflow {
        context: format!("domain of {len} digits base {q}"),
    })
}

/// Dealer constants for flattening a leaky protocol: the user-randomness
/// value r* whose worst-case leakage of the queried file to any maximal
/// forbidden set is smallest, then the filler files m* (files 2..f)
/// minimizing the same leakage at r*. Ties break toward the smallest
/// encoded value. For completely secure protocols every choice is equally
/// silent and (0, zeros) comes back.
pub fn choose_dealer_constants(
    p: &impl EnumerableSpir,
    structure: &AccessStructure,
    budget: u64,
) -> Result<(u64, Vec<u64>), Error> {
    if structure.parties() != p.servers() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "structure over {} parties against protocol over {}",
                structure.parties(),
                p.servers()
            ),
        });
    }
    if structure.max_forbidden().is_empty() {
        return Err(Error::EmptyCollection { which: "forbidden" });
    }
    let m = p.message_space()?;
    let w = p.seed_space()?;
    let r_space = p.user_rand_space()?;
    let f = p.file_count();
    let sets = structure.max_forbidden().len() as u128;
    let file_tuples = (m as u128).checked_pow(f as u32).ok_or(Error::BudgetExceeded {
        needed: u64::MAX,
        budget,
    })?;
    let needed = (r_space as u128) * file_tuples * (w as u128) * sets;
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed: needed.min(u64::MAX as u128) as u64, budget });
    }

    // Worst case over forbidden sets of I(M_1 ; D_B) at K = 1, R = r. The
    // free file symbols span all files when choosing r* and only file 1
    // once the rest is pinned to a filler candidate.
    let leakage_at = |r: u64, fixed_rest: Option<&[u64]>| -> Result<(bool, f64), Error> {
        let queries = p.query_symbols(1, r)?;
        let mut files = vec![0u64; f];
        if let Some(rest) = fixed_rest {
            files[1..].copy_from_slice(rest);
        }
        let free = if fixed_rest.is_some() { 1 } else { f };
        let total = (0..free).fold(w, |acc, _| acc * m);
        let mut worst_zero = true;
        let mut worst_bits = 0f64;
        for b in structure.max_forbidden() {
            let servers: Vec<usize> = b.to_indices();
            let mut cells: std::collections::BTreeMap<Vec<u64>, u64> =
                std::collections::BTreeMap::new();
            files[..free].fill(0);
            loop {
                for seed in 0..w {
                    let mut outcome = Vec::with_capacity(1 + servers.len());
                    outcome.push(files[0]);
                    for &s in &servers {
                        outcome.push(p.answer_symbol(s, queries[s - 1], &files, seed)?);
                    }
                    *cells.entry(outcome).or_insert(0) += 1;
                }
                if !advance(&mut files[..free], m) {
                    break;
                }
            }
            let pmf = JointPmf::from_counts(1 + servers.len(), cells, total)?;
            let xs = [0usize];
            let ys: Vec<usize> = (1..=servers.len()).collect();
            if pmf.factorizes(&xs, &ys)? {
                continue;
            }
            worst_zero = false;
            worst_bits = worst_bits.max(pmf.mutual_information(&xs, &ys)?);
        }
        Ok((worst_zero, worst_bits))
    };

    let mut best_r = 0;
    let mut best: Option<(bool, f64)> = None;
    for r in 0..r_space {
        let score = leakage_at(r, None)?;
        if better(&score, &best) {
            best = Some(score);
            best_r = r;
        }
    }

    let mut rest = vec![0u64; f - 1];
    let mut best_rest = rest.clone();
    let mut best_rest_score: Option<(bool, f64)> = None;
    loop {
        let score = leakage_at(best_r, Some(&rest))?;
        if better(&score, &best_rest_score) {
            best_rest_score = Some(score);
            best_rest = rest.clone();
        }
        if !advance(&mut rest, m) {
            break;
        }
    }
    Ok((best_r, best_rest))
}

fn better(candidate: &(bool, f64), incumbent: &Option<(bool, f64)>) -> bool {
    match incumbent {
        None => true,
        Some((zero, bits)) => {
            if candidate.0 != *zero {
                candidate.0
            } else {
                candidate.1 < *bits
            }
        }
    }
}

fn advance(digits: &mut [u64], base: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
