//! Deterministic simulated-network execution of retrieval sessions.
//!
//! One session runs a user against n in-process servers: the user draws
//! its randomness, sends every server its query rows, the servers named in
//! the response pattern answer, the rest stay silent, and the user then
//! tries to reconstruct from whoever answered. A configured coalition is
//! tapped: the trace records exactly the queries those servers saw.
//!
//! There is no real network. The servers never talk to each other, so an
//! event loop with total ordering loses nothing: queries are dispatched by
//! ascending server index and answers collected the same way, which makes
//! traces reproducible down to the byte.
//!
//! Randomness contract: every draw comes from ChaCha20 seeded with the
//! config's 64-bit seed (`ChaCha20Rng::seed_from_u64`), a portable stream
//! that is identical on every platform. Draw order is fixed: user
//! randomness first (row-major, one `gen_range(0..q)` per entry), then the
//! file vector, then the shared server seed, skipping whichever of them
//! the config pins to fixed values. Identical configs therefore produce
//! identical traces.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::access::PartySet;
use crate::error::Error;
use crate::gf::FieldMatrix;
use crate::spir::{EnumerableSpir, ProjectedLinearSpir};

/// A value the session either pins or draws from the session PRNG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSpec {
    Random,
    Fixed(Vec<u64>),
}

/// Full description of one session; [`run_session`] is a pure function of
/// this value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub protocol: ProjectedLinearSpir,
    /// Requested file index, 1-based.
    pub k: usize,
    /// Servers that answer; the rest stay silent.
    pub respond: PartySet,
    /// Servers whose received queries the adversary sees.
    pub collude: PartySet,
    /// PRNG seed for every random draw in the session.
    pub seed: u64,
    /// File vector of length f*x, or a fresh uniform draw.
    pub files: ValueSpec,
    /// Server-shared seed of length y, or a fresh uniform draw.
    pub shared_seed: ValueSpec,
    /// User randomness, row-major of length y*f*x, or a fresh uniform draw.
    pub user_rand: ValueSpec,
}

/// One entry of the ordered message log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum SessionEvent {
    QuerySent { server: usize },
    AnswerReceived { server: usize, answer: Vec<u64> },
    NoResponse { server: usize },
}

/// How the session ended. `Mismatch` is a tripwire: an honest linear
/// execution can never produce it, so seeing one means the protocol object
/// itself is inconsistent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SessionOutcome {
    Reconstructed { value: Vec<u64> },
    Unreachable,
    Mismatch { got: Vec<u64>, expected: Vec<u64> },
}

/// Complete record of one session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionTrace {
    pub k: usize,
    pub files: Vec<u64>,
    pub shared_seed: Vec<u64>,
    pub user_rand: Vec<Vec<u64>>,
    pub events: Vec<SessionEvent>,
    /// Query rows seen by each colluding server.
    pub adversary_view: BTreeMap<usize, Vec<Vec<u64>>>,
    pub outcome: SessionOutcome,
}

fn resolve(
    spec: &ValueSpec,
    len: usize,
    q: u64,
    what: &str,
    rng: &mut ChaCha20Rng,
) -> Result<Vec<u64>, Error> {
    match spec {
        ValueSpec::Random => Ok((0..len).map(|_| rng.gen_range(0..q)).collect()),
        ValueSpec::Fixed(values) => {
            if values.len() != len {
                return Err(Error::DimensionMismatch {
                    context: format!("{what} of length {} against required {len}", values.len()),
                });
            }
            for &v in values {
                if v >= q {
                    return Err(Error::EntryOutOfRange { value: v, q });
                }
            }
            Ok(values.clone())
        }
    }
}

/// Runs one session. An unauthorized response pattern is a normal
/// [`SessionOutcome::Unreachable`], not an error; errors are reserved for
/// malformed configs.
pub fn run_session(cfg: &SessionConfig) -> Result<SessionTrace, Error> {
    let p = &cfg.protocol;
    let n = p.parties();
    let f = p.file_count();
    let x = p.secret_width();
    let y = p.randomness_width();
    let q = p.modulus().value();
    if cfg.k == 0 || cfg.k > f {
        return Err(Error::IndexOutOfRange {
            context: format!("file {} of {}", cfg.k, f),
        });
    }
    for set in [&cfg.respond, &cfg.collude] {
        if !set.fits(n) {
            return Err(Error::PartyOutOfRange {
                party: *set.to_indices().last().unwrap_or(&0),
                n,
            });
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let rand_digits = resolve(&cfg.user_rand, y * f * x, q, "user randomness", &mut rng)?;
    let files = resolve(&cfg.files, f * x, q, "file vector", &mut rng)?;
    let seed = resolve(&cfg.shared_seed, y, q, "shared seed", &mut rng)?;
    let rand_rows: Vec<Vec<u64>> =
        rand_digits.chunks(f * x).map(<[u64]>::to_vec).collect();
    let user_rand = if y == 0 {
        FieldMatrix::zero(p.modulus(), 0, f * x)
    } else {
        FieldMatrix::from_rows(p.modulus(), &rand_rows)?
    };

    let queries = p.make_query(cfg.k, &user_rand)?;
    let mut events = Vec::with_capacity(2 * n);
    for server in 1..=n {
        events.push(SessionEvent::QuerySent { server });
    }
    let mut answers = vec![Vec::new(); n];
    for server in 1..=n {
        if cfg.respond.contains(server) {
            let answer = p.answer(server, &queries[server - 1], &files, &seed)?;
            answers[server - 1] = answer.clone();
            events.push(SessionEvent::AnswerReceived { server, answer });
        } else {
            events.push(SessionEvent::NoResponse { server });
        }
    }

    let adversary_view: BTreeMap<usize, Vec<Vec<u64>>> = cfg
        .collude
        .to_indices()
        .into_iter()
        .map(|server| (server, queries[server - 1].to_rows()))
        .collect();

    let outcome = match p.reconstruct_file(&cfg.respond, &answers, cfg.k)? {
        None => SessionOutcome::Unreachable,
        Some(got) => {
            let expected = files[(cfg.k - 1) * x..cfg.k * x].to_vec();
            if got == expected {
                SessionOutcome::Reconstructed { value: got }
            } else {
                SessionOutcome::Mismatch { got, expected }
            }
        }
    };

    Ok(SessionTrace {
        k: cfg.k,
        files,
        shared_seed: seed,
        user_rand: rand_rows,
        events,
        adversary_view,
        outcome,
    })
}

/// Per-index tallies of one sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KSweep {
    pub k: usize,
    pub successes: u64,
    pub unreachable: u64,
    pub mismatches: u64,
    /// Adversary views seen across the sweep, keyed by the colluders'
    /// query symbols joined with commas.
    pub view_histogram: BTreeMap<String, u64>,
}

/// Result of [`sweep_sessions`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub trials: u64,
    pub respond: PartySet,
    pub collude: PartySet,
    pub per_k: Vec<KSweep>,
}

fn view_key(q: u64, view: &BTreeMap<usize, Vec<Vec<u64>>>) -> Result<String, Error> {
    let mut parts = Vec::with_capacity(view.len());
    for rows in view.values() {
        let flat: Vec<u64> = rows.iter().flatten().copied().collect();
        parts.push(crate::gf::encode_base_q(q, &flat)?.to_string());
    }
    Ok(parts.join(","))
}

/// Runs `trials` sessions of the template for every file index. Trial i
/// uses seed `template.seed + i` (wrapping), so the random draws of trial
/// i are identical across indices and the per-index view histograms are
/// directly comparable. Values the template pins stay pinned in every
/// trial. The budget counts sessions.
pub fn sweep_sessions(
    template: &SessionConfig,
    trials: u64,
    budget: u64,
) -> Result<SweepSummary, Error> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let f = template.protocol.file_count();
    let needed = (trials as u128) * (f as u128);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: needed.min(u64::MAX as u128) as u64,
            budget,
        });
    }
    let mut per_k = Vec::with_capacity(f);
    for k in 1..=f {
        let mut tally = KSweep {
            k,
            successes: 0,
            unreachable: 0,
            mismatches: 0,
            view_histogram: BTreeMap::new(),
        };
        for i in 0..trials {
            let mut cfg = template.clone();
            cfg.k = k;
            cfg.seed = template.seed.wrapping_add(i);
            let trace = run_session(&cfg)?;
            match trace.outcome {
                SessionOutcome::Reconstructed { .. } => tally.successes += 1,
                SessionOutcome::Unreachable => tally.unreachable += 1,
                SessionOutcome::Mismatch { .. } => tally.mismatches += 1,
            }
            let key = view_key(cfg.protocol.modulus().value(), &trace.adversary_view)?;
            *tally.view_histogram.entry(key).or_insert(0) += 1;
        }
        per_k.push(tally);
    }
    Ok(SweepSummary {
        trials,
        respond: template.respond,
        collude: template.collude,
        per_k,
    })
}

/// Exhaustive companion to the sweep histograms: for each file index, the
/// exact multiset of adversary views over every user-randomness value,
/// keyed like [`KSweep::view_histogram`]. On a protocol whose queries hide
/// the index, the returned maps are identical across indices. The budget
/// counts enumerated (index, randomness) pairs.
pub fn adversary_view_multisets(
    protocol: &ProjectedLinearSpir,
    collude: &PartySet,
    budget: u64,
) -> Result<Vec<BTreeMap<String, u64>>, Error> {
    if !collude.fits(protocol.parties()) {
        return Err(Error::PartyOutOfRange {
            party: *collude.to_indices().last().unwrap_or(&0),
            n: protocol.parties(),
        });
    }
    let f = protocol.file_count();
    let rs = protocol.user_rand_space()?;
    let needed = (rs as u128) * (f as u128);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: needed.min(u64::MAX as u128) as u64,
            budget,
        });
    }
    let servers = collude.to_indices();
    let mut out = Vec::with_capacity(f);
    for k in 1..=f {
        let mut multiset: BTreeMap<String, u64> = BTreeMap::new();
        for r in 0..rs {
            let symbols = protocol.query_symbols(k, r)?;
            let key = servers
                .iter()
                .map(|&s| symbols[s - 1].to_string())
                .collect::<Vec<_>>()
                .join(",");
            *multiset.entry(key).or_insert(0) += 1;
        }
        out.push(multiset);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn set(indices: &[usize]) -> PartySet {
        PartySet::from_indices(indices, 3).unwrap()
    }

    fn fixed_config() -> SessionConfig {
        SessionConfig {
            protocol: samples::three_party_spir(2),
            k: 1,
            respond: set(&[2, 3]),
            collude: set(&[1, 2]),
            seed: 7,
            files: ValueSpec::Fixed(vec![2, 1]),
            shared_seed: ValueSpec::Fixed(vec![1, 2]),
            user_rand: ValueSpec::Fixed(vec![0; 4]),
        }
    }

    #[test]
    fn fixed_session_reproduces_worked_example() {
        let trace = run_session(&fixed_config()).unwrap();
        assert_eq!(
            trace.outcome,
            SessionOutcome::Reconstructed { value: vec![2] }
        );
        assert_eq!(
            trace.events,
            vec![
                SessionEvent::QuerySent { server: 1 },
                SessionEvent::QuerySent { server: 2 },
                SessionEvent::QuerySent { server: 3 },
                SessionEvent::NoResponse { server: 1 },
                SessionEvent::AnswerReceived { server: 2, answer: vec![2] },
                SessionEvent::AnswerReceived { server: 3, answer: vec![0, 0] },
            ]
        );
        let viewed: Vec<usize> = trace.adversary_view.keys().copied().collect();
        assert_eq!(viewed, vec![1, 2]);
        assert_eq!(trace.adversary_view[&1], vec![vec![0, 0]]);
        assert_eq!(trace.adversary_view[&2], vec![vec![1, 0]]);
    }

    #[test]
    fn unauthorized_responders_are_unreachable_not_an_error() {
        let mut cfg = fixed_config();
        cfg.respond = set(&[1, 2]);
        let trace = run_session(&cfg).unwrap();
        assert_eq!(trace.outcome, SessionOutcome::Unreachable);
        assert!(trace
            .events
            .contains(&SessionEvent::NoResponse { server: 3 }));
    }

    #[test]
    fn full_response_set_reconstructs_every_index() {
        for k in 1..=2 {
            for seed in 0..20 {
                let cfg = SessionConfig {
                    protocol: samples::three_party_spir(2),
                    k,
                    respond: set(&[1, 2, 3]),
                    collude: set(&[]),
                    seed,
                    files: ValueSpec::Random,
                    shared_seed: ValueSpec::Random,
                    user_rand: ValueSpec::Random,
                };
                let trace = run_session(&cfg).unwrap();
                let expected = vec![trace.files[k - 1]];
                assert_eq!(
                    trace.outcome,
                    SessionOutcome::Reconstructed { value: expected },
                    "k={k} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn identical_configs_yield_byte_identical_traces() {
        let cfg = SessionConfig {
            files: ValueSpec::Random,
            shared_seed: ValueSpec::Random,
            user_rand: ValueSpec::Random,
            ..fixed_config()
        };
        let a = serde_json::to_string(&run_session(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_session(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_configs_are_rejected() {
        let mut cfg = fixed_config();
        cfg.k = 3;
        assert!(matches!(
            run_session(&cfg),
            Err(Error::IndexOutOfRange { .. })
        ));
        let mut cfg = fixed_config();
        cfg.files = ValueSpec::Fixed(vec![1]);
        assert!(matches!(
            run_session(&cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut cfg = fixed_config();
        cfg.shared_seed = ValueSpec::Fixed(vec![3, 0]);
        assert!(matches!(
            run_session(&cfg),
            Err(Error::EntryOutOfRange { .. })
        ));
        let mut cfg = fixed_config();
        cfg.respond = PartySet::from_mask(0b1000);
        assert!(matches!(
            run_session(&cfg),
            Err(Error::PartyOutOfRange { party: 4, n: 3 })
        ));
    }

    #[test]
    fn sweep_counts_match_the_access_structure() {
        let template = SessionConfig {
            files: ValueSpec::Random,
            shared_seed: ValueSpec::Random,
            user_rand: ValueSpec::Random,
            ..fixed_config()
        };
        let summary = sweep_sessions(&template, 100, 10_000).unwrap();
        assert_eq!(summary.per_k.len(), 2);
        for tally in &summary.per_k {
            assert_eq!(tally.successes, 100);
            assert_eq!(tally.unreachable, 0);
            assert_eq!(tally.mismatches, 0);
            assert_eq!(tally.view_histogram.values().sum::<u64>(), 100);
        }

        let mut blocked = template.clone();
        blocked.respond = set(&[1, 2]);
        let summary = sweep_sessions(&blocked, 100, 10_000).unwrap();
        for tally in &summary.per_k {
            assert_eq!(tally.successes, 0);
            assert_eq!(tally.unreachable, 100);
        }
    }

    #[test]
    fn sweep_rejects_zero_trials_and_tiny_budgets() {
        let template = fixed_config();
        assert_eq!(
            sweep_sessions(&template, 0, 10_000),
            Err(Error::ZeroTrials)
        );
        assert!(matches!(
            sweep_sessions(&template, 100, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn exhaustive_adversary_views_are_index_blind() {
        let protocol = samples::three_party_spir(2);
        for collude in [set(&[1, 2]), set(&[3])] {
            let multisets =
                adversary_view_multisets(&protocol, &collude, 10_000).unwrap();
            assert_eq!(multisets.len(), 2);
            assert_eq!(multisets[0], multisets[1], "collude {collude}");
            assert_eq!(multisets[0].values().sum::<u64>(), 81);
        }
    }

    #[test]
    fn broken_protocol_views_separate_by_index() {
        let spir = samples::three_party_spir(2);
        let broken = crate::spir::ProjectedLinearSpir::new(
            FieldMatrix::zero(spir.modulus(), 4, 2),
            spir.secret_part().clone(),
            spir.position_map().to_vec(),
            3,
            2,
        )
        .unwrap();
        let multisets =
            adversary_view_multisets(&broken, &set(&[1, 2]), 10_000).unwrap();
        assert_ne!(multisets[0], multisets[1]);
    }
}
