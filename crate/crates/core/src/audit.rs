//! Exact information-theoretic security audits by full enumeration.
//!
//! Every measured quantity is built from a joint probability mass function
//! over a finite enumeration of protocol states. Probabilities live as
//! integer counts over a declared total, so zero-leakage questions are
//! decided exactly: I(X;Y) == 0 if and only if the joint counts factor
//! into the product of the marginal counts, a cross-multiplication over
//! u128. Floating point appears only when a nonzero quantity is converted
//! to bits for reporting.
//!
//! The audited quantities: alpha is the worst-case maximum-likelihood
//! decoding error of the retrieved file (or shared secret) over every
//! minimal authorized set, exact as a rational; beta is the worst leakage
//! of the non-targeted files (or the secret) in bits; gamma is the worst
//! leakage of the queried index to a colluding forbidden set. A protocol
//! is completely secure when all three vanish exactly.
//!
//! [`leakage_bound`] evaluates the closed-form bound on how much a
//! flattened secret-sharing scheme can leak, as a function of
//! (alpha, beta, gamma), verbatim from its published form; the five
//! addends are exposed individually because the alpha convention of the
//! source formula is ambiguous and callers may want either reading.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::access::{AccessStructure, PartySet};
use crate::error::Error;
use crate::gf::{self, FieldMatrix};
use crate::mmsp::Mmsp;
use crate::nss::LinearNss;
use crate::spir::EnumerableSpir;
use crate::Rational;

/// Joint distribution of finitely many discrete variables, stored as
/// outcome counts over a declared enumeration total. Each probability is
/// exactly count/total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointPmf {
    arity: usize,
    cells: BTreeMap<Vec<u64>, u64>,
    total: u64,
}

impl JointPmf {
    /// Builds a pmf from outcome counts. The declared total must equal the
    /// sum of counts exactly; a mismatch means the enumeration that
    /// produced the counts skipped or double-tallied states.
    pub fn from_counts(
        arity: usize,
        cells: BTreeMap<Vec<u64>, u64>,
        total: u64,
    ) -> Result<Self, Error> {
        let mut sum: u64 = 0;
        for (outcome, &count) in &cells {
            if outcome.len() != arity {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "outcome of arity {} in a pmf of arity {}",
                        outcome.len(),
                        arity
                    ),
                });
            }
            sum = sum.checked_add(count).ok_or(Error::Unnormalized { sum: u64::MAX, total })?;
        }
        if sum != total || total == 0 {
            return Err(Error::Unnormalized { sum, total });
        }
        let cells = cells.into_iter().filter(|&(_, c)| c > 0).collect();
        Ok(JointPmf { arity, cells, total })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of outcomes with nonzero probability.
    pub fn support_len(&self) -> usize {
        self.cells.len()
    }

    /// Exact probability of one outcome tuple.
    pub fn probability(&self, outcome: &[u64]) -> Rational {
        let count = self.cells.get(outcome).copied().unwrap_or(0);
        Rational::new(count, self.total)
    }

    fn check_vars(&self, vars: &[usize]) -> Result<(), Error> {
        let mut seen = vec![false; self.arity];
        for &v in vars {
            if v >= self.arity {
                return Err(Error::IndexOutOfRange {
                    context: format!("variable {} of a pmf with arity {}", v, self.arity),
                });
            }
            if seen[v] {
                return Err(Error::OverlappingVariables { var: v });
            }
            seen[v] = true;
        }
        Ok(())
    }

    /// Counts of the marginal distribution over the listed variables, in
    /// the listed order.
    pub fn margin_counts(&self, vars: &[usize]) -> Result<BTreeMap<Vec<u64>, u64>, Error> {
        self.check_vars(vars)?;
        let mut out: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for (outcome, &count) in &self.cells {
            let key: Vec<u64> = vars.iter().map(|&v| outcome[v]).collect();
            *out.entry(key).or_insert(0) += count;
        }
        Ok(out)
    }

    /// Shannon entropy of the marginal over `vars`, in bits.
    pub fn entropy_bits(&self, vars: &[usize]) -> Result<f64, Error> {
        let margin = self.margin_counts(vars)?;
        Ok(entropy_of_counts(margin.values().copied(), self.total))
    }

    /// I(X;Y) = H(X) + H(Y) - H(XY) in bits. Exact-zero questions should
    /// use [`JointPmf::factorizes`] instead of comparing this to 0.0.
    pub fn mutual_information(&self, xs: &[usize], ys: &[usize]) -> Result<f64, Error> {
        self.check_disjoint(xs, ys)?;
        let joint: Vec<usize> = xs.iter().chain(ys).copied().collect();
        Ok(self.entropy_bits(xs)? + self.entropy_bits(ys)? - self.entropy_bits(&joint)?)
    }

    /// Exact test for I(X;Y) == 0: the joint counts factor through the
    /// marginals, checked by u128 cross-multiplication with no rounding.
    pub fn factorizes(&self, xs: &[usize], ys: &[usize]) -> Result<bool, Error> {
        self.check_disjoint(xs, ys)?;
        let mx = self.margin_counts(xs)?;
        let my = self.margin_counts(ys)?;
        let joint_vars: Vec<usize> = xs.iter().chain(ys).copied().collect();
        let mxy = self.margin_counts(&joint_vars)?;
        for (a, &ca) in &mx {
            for (b, &cb) in &my {
                let mut key = a.clone();
                key.extend_from_slice(b);
                let joint = mxy.get(&key).copied().unwrap_or(0);
                if (ca as u128) * (cb as u128) != (joint as u128) * (self.total as u128) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_disjoint(&self, xs: &[usize], ys: &[usize]) -> Result<(), Error> {
        let joint: Vec<usize> = xs.iter().chain(ys).copied().collect();
        self.check_vars(&joint)
    }

    /// Total variation distance (1/2) sum |p - q|, exact. Both pmfs must
    /// have the same arity; outcomes missing on one side count as zero.
    pub fn variational_distance(&self, other: &JointPmf) -> Result<Rational, Error> {
        if self.arity != other.arity {
            return Err(Error::DimensionMismatch {
                context: format!("pmf arities {} and {}", self.arity, other.arity),
            });
        }
        let denom = (self.total)
            .checked_mul(other.total)
            .and_then(|d| d.checked_mul(2))
            .ok_or(Error::SymbolOverflow {
                context: format!("pmf totals {} and {}", self.total, other.total),
            })?;
        let mut numer: u64 = 0;
        let keys = self.cells.keys().chain(other.cells.keys());
        let mut last: Option<&Vec<u64>> = None;
        let mut keys: Vec<&Vec<u64>> = keys.collect();
        keys.sort();
        for key in keys {
            if last == Some(key) {
                continue;
            }
            last = Some(key);
            let p = self.cells.get(key).copied().unwrap_or(0) as u128 * other.total as u128;
            let q = other.cells.get(key).copied().unwrap_or(0) as u128 * self.total as u128;
            numer += p.abs_diff(q) as u64;
        }
        Ok(Rational::new(numer, denom))
    }
}

fn entropy_of_counts(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    let t = total as f64;
    let mut weighted = 0f64;
    for c in counts {
        if c > 0 {
            weighted += (c as f64) * (c as f64).log2();
        }
    }
    t.log2() - weighted / t
}

/// Binary entropy h2(p) = -p log2 p - (1-p) log2 (1-p), with the endpoint
/// convention 0 log 0 = 0.
pub fn binary_entropy(p: f64) -> Result<f64, Error> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange { name: "p", value: p });
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// Which audited quantities are exactly zero, decided on the rational pmf
/// level rather than by floating-point comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroFlags {
    pub alpha: bool,
    pub beta: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<bool>,
}

/// Result of a full enumeration audit. `gamma_bits` is absent for
/// secret-sharing audits, which have no query phase; the rate fields are
/// absent for protocols that do not expose linear widths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    #[serde(serialize_with = "crate::serde_util::ser_ratio")]
    pub alpha: Rational,
    pub beta_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_bits: Option<f64>,
    /// Worst leakage in bits per maximal forbidden set: index leakage for
    /// retrieval audits, secret leakage for sharing audits.
    pub per_set: BTreeMap<String, f64>,
    pub exact_zero_flags: ZeroFlags,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::ser_opt_ratio"
    )]
    pub rate: Option<Rational>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::serde_util::ser_opt_ratio"
    )]
    pub randomness_rate: Option<Rational>,
}

impl AuditReport {
    /// True when every audited quantity is exactly zero.
    pub fn completely_secure(&self) -> bool {
        *self.alpha.numer() == 0
            && self.exact_zero_flags.beta
            && self.exact_zero_flags.gamma.unwrap_or(true)
    }
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_budget(needed: u128, budget: u64) -> Result<(), Error> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: needed.min(u64::MAX as u128) as u64,
            budget,
        });
    }
    Ok(())
}

fn spir_domains(p: &impl EnumerableSpir) -> Result<(u64, u64, u64, u128), Error> {
    let m = p.message_space()?;
    let w = p.seed_space()?;
    let rs = p.user_rand_space()?;
    let tuples = (m as u128)
        .checked_pow(p.file_count() as u32)
        .ok_or_else(|| Error::SymbolOverflow {
            context: format!("{} files over a message space of {}", p.file_count(), m),
        })?;
    Ok((m, w, rs, tuples))
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

/// Audits a retrieval protocol against an access structure by exhaustive
/// enumeration. alpha is the worst maximum-likelihood error of the
/// requested file over minimal authorized sets (ties broken toward the
/// smallest candidate, which never changes the error mass); beta is the
/// worst leakage of the non-requested files to the user over every
/// (user randomness, index) pair; gamma is the worst leakage of the index
/// to a maximal forbidden coalition under uniform index and randomness.
///
/// The budget counts enumerated joint states: one (files, seed) sweep per
/// (randomness, index) pair for beta plus one per minimal authorized set
/// for alpha, and one (index, randomness) sweep per forbidden set for
/// gamma.
pub fn audit_spir(
    p: &impl EnumerableSpir,
    structure: &AccessStructure,
    budget: u64,
) -> Result<AuditReport, Error> {
    if structure.parties() != p.servers() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "structure over {} parties against protocol over {}",
                structure.parties(),
                p.servers()
            ),
        });
    }
    if structure.min_authorized().is_empty() {
        return Err(Error::EmptyCollection { which: "authorized" });
    }
    if structure.max_forbidden().is_empty() {
        return Err(Error::EmptyCollection { which: "forbidden" });
    }
    let n = p.servers();
    let f = p.file_count();
    let (m, w, rs, tuples) = spir_domains(p)?;
    let sweep = tuples * w as u128;
    let auth = structure.min_authorized();
    let forb = structure.max_forbidden();
    let needed = (rs as u128) * (f as u128) * sweep * (auth.len() as u128 + 1)
        + (forb.len() as u128) * (f as u128) * (rs as u128);
    check_budget(needed, budget)?;
    let total = sweep as u64;

    let mut alpha = Rational::new(0, 1);
    let mut beta_bits = 0f64;
    let mut beta_zero = true;
    let beta_ys: Vec<usize> = (1..=n).collect();
    for r in 0..rs {
        for k in 1..=f {
            let queries = p.query_symbols(k, r)?;
            let mut beta_cells: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            let mut decoders: Vec<BTreeMap<Vec<u64>, BTreeMap<u64, u64>>> =
                vec![BTreeMap::new(); auth.len()];
            let mut files = vec![0u64; f];
            loop {
                let rest: Vec<u64> = files
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k - 1)
                    .map(|(_, &v)| v)
                    .collect();
                let rest_code = gf::encode_base_q(m.max(2), &rest)?;
                for seed in 0..w {
                    let mut d = Vec::with_capacity(n);
                    for server in 1..=n {
                        d.push(p.answer_symbol(server, queries[server - 1], &files, seed)?);
                    }
                    let mut key = Vec::with_capacity(1 + n);
                    key.push(rest_code);
                    key.extend_from_slice(&d);
                    *beta_cells.entry(key).or_insert(0) += 1;
                    for (decoder, a) in decoders.iter_mut().zip(auth) {
                        let view: Vec<u64> =
                            a.to_indices().iter().map(|&s| d[s - 1]).collect();
                        *decoder
                            .entry(view)
                            .or_default()
                            .entry(files[k - 1])
                            .or_insert(0) += 1;
                    }
                }
                if !advance(&mut files, m) {
                    break;
                }
            }
            for decoder in &decoders {
                let correct: u64 = decoder
                    .values()
                    .map(|per_value| per_value.values().copied().max().unwrap_or(0))
                    .sum();
                alpha = alpha.max(Rational::new(total - correct, total));
            }
            let pmf = JointPmf::from_counts(1 + n, beta_cells, total)?;
            if !pmf.factorizes(&[0], &beta_ys)? {
                beta_zero = false;
                beta_bits = beta_bits.max(pmf.mutual_information(&[0], &beta_ys)?);
            }
        }
    }

    let mut gamma_bits = 0f64;
    let mut gamma_zero = true;
    let mut per_set = BTreeMap::new();
    for b in forb {
        let servers = b.to_indices();
        let mut cells: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for k in 1..=f {
            for r in 0..rs {
                let queries = p.query_symbols(k, r)?;
                let mut key = Vec::with_capacity(1 + servers.len());
                key.push(k as u64);
                key.extend(servers.iter().map(|&s| queries[s - 1]));
                *cells.entry(key).or_insert(0) += 1;
            }
        }
        let pmf = JointPmf::from_counts(1 + servers.len(), cells, (f as u64) * rs)?;
        let ys: Vec<usize> = (1..=servers.len()).collect();
        let bits = if pmf.factorizes(&[0], &ys)? {
            0.0
        } else {
            gamma_zero = false;
            pmf.mutual_information(&[0], &ys)?
        };
        per_set.insert(b.to_string(), bits);
        gamma_bits = gamma_bits.max(bits);
    }

    let rates = p.linear_rates();
    Ok(AuditReport {
        exact_zero_flags: ZeroFlags {
            alpha: *alpha.numer() == 0,
            beta: beta_zero,
            gamma: Some(gamma_zero),
        },
        alpha,
        beta_bits,
        gamma_bits: Some(gamma_bits),
        per_set,
        rate: rates.map(|(r, _)| r),
        randomness_rate: rates.map(|(_, r)| r),
    })
}

/// Audits a linear sharing scheme: alpha is the worst maximum-likelihood
/// error of the full secret over minimal authorized sets, beta the worst
/// leakage of the secret to a maximal forbidden set, both over uniform
/// secret and dealer randomness. The budget counts one
/// (secret, randomness) sweep per audited set.
pub fn audit_nss(
    scheme: &LinearNss,
    structure: &AccessStructure,
    budget: u64,
) -> Result<AuditReport, Error> {
    if structure.parties() != scheme.parties() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "structure over {} parties against scheme over {}",
                structure.parties(),
                scheme.parties()
            ),
        });
    }
    if structure.min_authorized().is_empty() {
        return Err(Error::EmptyCollection { which: "authorized" });
    }
    let q = scheme.modulus().value();
    let x = scheme.secret_width();
    let y = scheme.randomness_width();
    let total = gf::checked_domain_size(q, x + y).ok_or_else(|| Error::SymbolOverflow {
        context: format!("{} dealer symbols base {}", x + y, q),
    })?;
    let auth = structure.min_authorized();
    let forb = structure.max_forbidden();
    let needed = (auth.len() as u128 + forb.len() as u128) * (total as u128);
    check_budget(needed, budget)?;

    let share_views = |parties: &[usize]| -> Result<Vec<(u64, Vec<u64>)>, Error> {
        // One row per dealer state: (secret code, per-party share symbols).
        let mut rows = Vec::with_capacity(total as usize);
        let mut secret = vec![0u64; x];
        loop {
            let secret_code = gf::encode_base_q(q, &secret)?;
            let mut rand = vec![0u64; y];
            loop {
                let shares = scheme.share(&secret, &rand)?;
                let mut view = Vec::with_capacity(parties.len());
                for &j in parties {
                    view.push(gf::encode_base_q(q, shares.party(j))?);
                }
                rows.push((secret_code, view));
                if !advance(&mut rand, q) {
                    break;
                }
            }
            if !advance(&mut secret, q) {
                break;
            }
        }
        Ok(rows)
    };

    let mut alpha = Rational::new(0, 1);
    for a in auth {
        let mut decoder: BTreeMap<Vec<u64>, BTreeMap<u64, u64>> = BTreeMap::new();
        for (secret_code, view) in share_views(&a.to_indices())? {
            *decoder.entry(view).or_default().entry(secret_code).or_insert(0) += 1;
        }
        let correct: u64 = decoder
            .values()
            .map(|per_value| per_value.values().copied().max().unwrap_or(0))
            .sum();
        alpha = alpha.max(Rational::new(total - correct, total));
    }

    let mut beta_bits = 0f64;
    let mut beta_zero = true;
    let mut per_set = BTreeMap::new();
    for b in forb {
        let servers = b.to_indices();
        let mut cells: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for (secret_code, view) in share_views(&servers)? {
            let mut key = Vec::with_capacity(1 + view.len());
            key.push(secret_code);
            key.extend(view);
            *cells.entry(key).or_insert(0) += 1;
        }
        let pmf = JointPmf::from_counts(1 + servers.len(), cells, total)?;
        let ys: Vec<usize> = (1..=servers.len()).collect();
        let bits = if pmf.factorizes(&[0], &ys)? {
            0.0
        } else {
            beta_zero = false;
            pmf.mutual_information(&[0], &ys)?
        };
        per_set.insert(b.to_string(), bits);
        beta_bits = beta_bits.max(bits);
    }

    let (rate, randomness_rate) = scheme.rates();
    Ok(AuditReport {
        exact_zero_flags: ZeroFlags {
            alpha: *alpha.numer() == 0,
            beta: beta_zero,
            gamma: None,
        },
        alpha,
        beta_bits,
        gamma_bits: None,
        per_set,
        rate: Some(rate),
        randomness_rate: Some(randomness_rate),
    })
}

/// Checks that a colluding forbidden set's answers carry nothing about the
/// file vector beyond what the conditioning already fixes: for every
/// maximal forbidden set, index, and user randomness value, the joint
/// distribution of (all files, answers of the set) factorizes exactly
/// under uniform files and seed. Completely secure protocols pass; any
/// protocol whose answers let a coalition infer file contents fails.
pub fn check_answer_independence(
    p: &impl EnumerableSpir,
    structure: &AccessStructure,
    budget: u64,
) -> Result<bool, Error> {
    if structure.parties() != p.servers() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "structure over {} parties against protocol over {}",
                structure.parties(),
                p.servers()
            ),
        });
    }
    let f = p.file_count();
    let (m, w, rs, tuples) = spir_domains(p)?;
    let forb = structure.max_forbidden();
    let needed =
        (forb.len() as u128) * (f as u128) * (rs as u128) * tuples * (w as u128);
    check_budget(needed, budget)?;
    let total = (tuples as u64) * w;

    for b in forb {
        let servers = b.to_indices();
        let ys: Vec<usize> = (1..=servers.len()).collect();
        for k in 1..=f {
            for r in 0..rs {
                let queries = p.query_symbols(k, r)?;
                let mut cells: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
                let mut files = vec![0u64; f];
                loop {
                    let files_code = gf::encode_base_q(m.max(2), &files)?;
                    for seed in 0..w {
                        let mut key = Vec::with_capacity(1 + servers.len());
                        key.push(files_code);
                        for &s in &servers {
                            key.push(p.answer_symbol(s, queries[s - 1], &files, seed)?);
                        }
                        *cells.entry(key).or_insert(0) += 1;
                    }
                    if !advance(&mut files, m) {
                        break;
                    }
                }
                let pmf = JointPmf::from_counts(1 + servers.len(), cells, total)?;
                if !pmf.factorizes(&[0], &ys)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Checks the rank law of linear images: under uniform input the entropy
/// of a*X is exactly rank(a) bits in base q, verified on exact counts (the
/// image must be uniform over q^rank outcomes); and for `trials` randomly
/// sampled non-uniform input distributions the entropy never exceeds that
/// bound. Sampling draws from a fixed internal seed, so runs are
/// reproducible. `trials` may be zero to run only the exact half.
pub fn check_rank_entropy(a: &FieldMatrix, trials: u32, budget: u64) -> Result<bool, Error> {
    use rand::{Rng, SeedableRng};

    let q = a.modulus().value();
    let cols = a.width();
    let states = gf::checked_domain_size(q, cols).ok_or_else(|| Error::SymbolOverflow {
        context: format!("{cols} input symbols base {q}"),
    })?;
    let needed = (states as u128) * (1 + trials as u128);
    check_budget(needed, budget)?;

    let rank = a.rank();
    let mut image_of = Vec::with_capacity(states as usize);
    let mut image_counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut input = vec![0u64; cols];
    loop {
        let out = a.mul_vec(&input)?;
        *image_counts.entry(out.clone()).or_insert(0) += 1;
        image_of.push(out);
        if !advance(&mut input, q) {
            break;
        }
    }
    let support = gf::checked_domain_size(q, rank).expect("rank at most cols");
    let fiber = states / support;
    if image_counts.len() as u64 != support
        || image_counts.values().any(|&c| c != fiber)
    {
        return Ok(false);
    }

    let bound = (rank as f64) * (q as f64).log2();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0x72616e6b);
    for _ in 0..trials {
        let mut weights: Vec<u64> = (0..states).map(|_| rng.gen_range(0..8)).collect();
        if weights.iter().all(|&c| c == 0) {
            weights[0] = 1;
        }
        let total: u64 = weights.iter().sum();
        let mut counts: BTreeMap<&[u64], u64> = BTreeMap::new();
        for (img, &c) in image_of.iter().zip(&weights) {
            if c > 0 {
                *counts.entry(img.as_slice()).or_insert(0) += c;
            }
        }
        let h = entropy_of_counts(counts.values().copied(), total);
        if h > bound + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that the shares handed to every maximal forbidden set are
/// distributed independently of the secret: for each such set, the exact
/// distribution of its share vector under uniform dealer randomness is the
/// same for every fixed secret value. Returns the first set that violates
/// the property, or `None` when all pass.
pub fn check_share_secrecy(
    program: &Mmsp,
    structure: &AccessStructure,
    budget: u64,
) -> Result<Option<PartySet>, Error> {
    if structure.parties() != program.parties() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "structure over {} parties against program over {}",
                structure.parties(),
                program.parties()
            ),
        });
    }
    let q = program.modulus().value();
    let x = program.secret_width();
    let y = program.randomness_width();
    let states = gf::checked_domain_size(q, x + y).ok_or_else(|| Error::SymbolOverflow {
        context: format!("{} dealer symbols base {}", x + y, q),
    })?;
    let needed = (structure.max_forbidden().len() as u128) * (states as u128);
    check_budget(needed, budget)?;

    for b in structure.max_forbidden() {
        let sub = program.rows_matrix(b);
        let mut baseline: Option<BTreeMap<Vec<u64>, u64>> = None;
        let mut secret = vec![0u64; x];
        loop {
            let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            let mut rand = vec![0u64; y];
            loop {
                let mut state = secret.clone();
                state.extend_from_slice(&rand);
                *counts.entry(sub.mul_vec(&state)?).or_insert(0) += 1;
                if !advance(&mut rand, q) {
                    break;
                }
            }
            match &baseline {
                None => baseline = Some(counts),
                Some(base) => {
                    if *base != counts {
                        return Ok(Some(*b));
                    }
                }
            }
            if !advance(&mut secret, q) {
                break;
            }
        }
    }
    Ok(None)
}

/// The five addends of the leakage bound, their sum, and the domain flags.
/// `value` is negative infinity when alpha is zero, with `alpha_zero` set;
/// `h2_clamped` records that sqrt(2*gamma*f) exceeded 1 and was clamped
/// inside the binary-entropy term only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageBound {
    pub addends: [f64; 5],
    pub value: f64,
    pub alpha_zero: bool,
    pub h2_clamped: bool,
}

/// Evaluates the closed-form leakage bound
///
/// ```text
/// 2*beta + (1 - alpha + 4*sqrt(2*gamma*f)) * log2(m)
///        + 2*h2(sqrt(2*gamma*f)) + h2(1 - alpha) + log2(alpha)
/// ```
///
/// verbatim, for message-space size `m` and file count `f`, with beta and
/// gamma in bits. The sqrt term is clamped to 1 inside h2 (and flagged);
/// everywhere else the formula is evaluated as printed, including the
/// divergence to negative infinity at alpha = 0.
pub fn leakage_bound(
    alpha: Rational,
    beta_bits: f64,
    gamma_bits: f64,
    message_space: u64,
    file_count: usize,
) -> Result<LeakageBound, Error> {
    if alpha > Rational::new(1, 1) {
        return Err(Error::ProbabilityOutOfRange { name: "alpha", value: ratio_f64(alpha) });
    }
    if !beta_bits.is_finite() || beta_bits < 0.0 {
        return Err(Error::NegativeArgument { name: "beta_bits", value: beta_bits });
    }
    if !gamma_bits.is_finite() || gamma_bits < 0.0 {
        return Err(Error::NegativeArgument { name: "gamma_bits", value: gamma_bits });
    }
    if message_space == 0 {
        return Err(Error::IndexOutOfRange { context: "message space of size 0".to_string() });
    }
    if file_count == 0 {
        return Err(Error::IndexOutOfRange { context: "file count 0".to_string() });
    }
    let af = ratio_f64(alpha);
    let s = (2.0 * gamma_bits * file_count as f64).sqrt();
    let h2_clamped = s > 1.0;
    let alpha_zero = *alpha.numer() == 0;
    let addends = [
        2.0 * beta_bits,
        (1.0 - af + 4.0 * s) * (message_space as f64).log2(),
        2.0 * binary_entropy(s.min(1.0))?,
        binary_entropy(1.0 - af)?,
        if alpha_zero { f64::NEG_INFINITY } else { af.log2() },
    ];
    Ok(LeakageBound {
        addends,
        value: addends.iter().sum(),
        alpha_zero,
        h2_clamped,
    })
}
