//! Linear non-perfect secret sharing.
//!
//! A scheme here is exactly a span program wearing its dealer hat: the
//! program matrix becomes the encoder, shares are the entries of
//! encoder * (secret ; randomness) handed out row by row according to the
//! position map. Authorized sets reconstruct by solving for the basis
//! vectors inside their row span; forbidden sets see a distribution
//! independent of the secret. Sets in neither family may learn something
//! without being able to reconstruct, which is the non-perfect part.

use serde::{Deserialize, Serialize};

use crate::access::PartySet;
use crate::error::Error;
use crate::gf::{FieldMatrix, FieldModulus};
use crate::mmsp::Mmsp;
use crate::Rational;

/// Secret-sharing scheme: an encoder with the same shape contract as a
/// span program (validated by the same constructor).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NssJson", into = "NssJson")]
pub struct LinearNss {
    inner: Mmsp,
}

/// Wire form: span-program fields plus `"kind":"nss"`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NssJson {
    kind: String,
    q: u64,
    x: usize,
    y: usize,
    n: usize,
    tau: Vec<usize>,
    g: Vec<Vec<u64>>,
}

impl TryFrom<NssJson> for LinearNss {
    type Error = Error;

    fn try_from(json: NssJson) -> Result<Self, Error> {
        if json.kind != "nss" {
            return Err(Error::WrongKind { expected: "nss", found: json.kind });
        }
        let modulus = FieldModulus::new(json.q)?;
        let g = FieldMatrix::from_rows(modulus, &json.g)?;
        Ok(LinearNss { inner: Mmsp::new(g, json.x, json.y, json.n, json.tau)? })
    }
}

impl From<LinearNss> for NssJson {
    fn from(nss: LinearNss) -> NssJson {
        NssJson {
            kind: "nss".to_string(),
            q: nss.inner.modulus().value(),
            x: nss.inner.secret_width(),
            y: nss.inner.randomness_width(),
            n: nss.inner.parties(),
            tau: nss.inner.position_map().to_vec(),
            g: nss.inner.matrix().to_rows(),
        }
    }
}

/// Per-party share vectors. `per_party[j-1]` holds party j's shares in
/// ascending encoder-row order; concatenating all parties' vectors in
/// global row order reproduces encoder * (secret ; randomness).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NssShares {
    pub per_party: Vec<Vec<u64>>,
}

impl NssShares {
    pub fn party(&self, j: usize) -> &[u64] {
        &self.per_party[j - 1]
    }
}

impl LinearNss {
    /// Validates the encoder shape; same contract as the span-program
    /// constructor.
    pub fn new(
        encoder: FieldMatrix,
        x: usize,
        y: usize,
        n: usize,
        tau: Vec<usize>,
    ) -> Result<Self, Error> {
        Ok(LinearNss { inner: Mmsp::new(encoder, x, y, n, tau)? })
    }

    /// Wraps an already-validated program as a scheme.
    pub fn from_program(program: Mmsp) -> Self {
        LinearNss { inner: program }
    }

    /// The underlying program matrix, unchanged.
    pub fn nss_to_mmsp(&self) -> Mmsp {
        self.inner.clone()
    }

    pub fn as_program(&self) -> &Mmsp {
        &self.inner
    }

    pub fn encoder(&self) -> &FieldMatrix {
        self.inner.matrix()
    }

    pub fn modulus(&self) -> FieldModulus {
        self.inner.modulus()
    }

    pub fn secret_width(&self) -> usize {
        self.inner.secret_width()
    }

    pub fn randomness_width(&self) -> usize {
        self.inner.randomness_width()
    }

    pub fn parties(&self) -> usize {
        self.inner.parties()
    }

    pub fn row_count(&self) -> usize {
        self.inner.row_count()
    }

    pub fn position_map(&self) -> &[usize] {
        self.inner.position_map()
    }

    /// (share rate x/z, randomness rate y/x).
    pub fn rates(&self) -> (Rational, Rational) {
        (
            self.inner.rate(),
            Rational::new(self.randomness_width() as u64, self.secret_width() as u64),
        )
    }

    /// Deals shares for a secret of length x using randomness of length y.
    pub fn share(&self, secret: &[u64], randomness: &[u64]) -> Result<NssShares, Error> {
        let x = self.secret_width();
        let y = self.randomness_width();
        if secret.len() != x || randomness.len() != y {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "secret length {} and randomness length {} against split {}+{}",
                    secret.len(),
                    randomness.len(),
                    x,
                    y
                ),
            });
        }
        let mut input = Vec::with_capacity(x + y);
        for &v in secret.iter().chain(randomness) {
            input.push(self.modulus().check(v)?);
        }
        let z_vec = self.encoder().mul_vec(&input)?;
        let mut per_party = vec![Vec::new(); self.parties()];
        for (row, &value) in z_vec.iter().enumerate() {
            per_party[self.position_map()[row] - 1].push(value);
        }
        Ok(NssShares { per_party })
    }

    /// Recovers the secret from the shares of parties in `a`. Shares of
    /// parties outside `a` are never read. `None` means the subset's rows
    /// do not span the basis block, so no reconstruction exists.
    ///
    /// The provided shares must lie in the encoder's column space
    /// (restricted to the subset's rows); inconsistent vectors are data
    /// corruption, reported as an error rather than decoded to garbage.
    pub fn reconstruct(
        &self,
        a: &PartySet,
        shares: &NssShares,
    ) -> Result<Option<Vec<u64>>, Error> {
        if !self.inner.accepts(a)? {
            return Ok(None);
        }
        let rows = self.inner.rows_of(a);
        let flat = crate::mmsp::gather_rows_by_party(
            self.position_map(),
            self.parties(),
            self.modulus(),
            a,
            &shares.per_party,
        )?;
        let sub = self.encoder().select_rows(&rows)?;
        // Column-space membership: some (secret ; randomness) must explain
        // the observed shares.
        if sub.transpose().solve_left(&flat)?.is_none() {
            return Err(Error::InvalidShares);
        }
        let mut secret = Vec::with_capacity(self.secret_width());
        for i in 0..self.secret_width() {
            let mut e = vec![0; sub.width()];
            e[i] = 1;
            let combination = sub
                .solve_left(&e)?
                .expect("acceptance already established span membership");
            let q = self.modulus();
            let value = combination
                .iter()
                .zip(&flat)
                .fold(0, |acc, (&c, &s)| q.add(acc, q.mul(c, s)));
            secret.push(value);
        }
        Ok(Some(secret))
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn set(indices: &[usize]) -> PartySet {
        PartySet::from_indices(indices, 3).unwrap()
    }

    #[test]
    fn share_splits_encoder_output_by_party() {
        let nss = samples::three_party_nss();
        let shares = nss.share(&[2], &[1, 2]).unwrap();
        assert_eq!(shares.per_party, vec![vec![2], vec![2], vec![0, 0]]);
    }

    #[test]
    fn share_validates_lengths_and_entries() {
        let nss = samples::three_party_nss();
        assert!(matches!(
            nss.share(&[2, 1], &[1, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            nss.share(&[2], &[1]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            nss.share(&[3], &[1, 2]),
            Err(Error::EntryOutOfRange { .. })
        ));
    }

    #[test]
    fn authorized_sets_reconstruct() {
        let nss = samples::three_party_nss();
        let shares = nss.share(&[2], &[1, 2]).unwrap();
        assert_eq!(nss.reconstruct(&set(&[2, 3]), &shares).unwrap(), Some(vec![2]));
        assert_eq!(nss.reconstruct(&set(&[1, 2, 3]), &shares).unwrap(), Some(vec![2]));
    }

    #[test]
    fn forbidden_sets_cannot_reconstruct() {
        let nss = samples::three_party_nss();
        let shares = nss.share(&[2], &[1, 2]).unwrap();
        assert_eq!(nss.reconstruct(&set(&[1, 2]), &shares).unwrap(), None);
        assert_eq!(nss.reconstruct(&set(&[3]), &shares).unwrap(), None);
        assert_eq!(nss.reconstruct(&PartySet::EMPTY, &shares).unwrap(), None);
    }

    #[test]
    fn corrupted_shares_are_detected() {
        let nss = samples::three_party_nss();
        let mut shares = nss.share(&[2], &[1, 2]).unwrap();
        // The full-party row space is a proper subspace of F_3^4, so a
        // single flipped share falls outside the encoder's column space.
        shares.per_party[0][0] = (shares.per_party[0][0] + 1) % 3;
        assert_eq!(
            nss.reconstruct(&set(&[1, 2, 3]), &shares),
            Err(Error::InvalidShares)
        );
    }

    #[test]
    fn reconstruction_is_exhaustively_correct() {
        let nss = samples::three_party_nss();
        let (authorized, _) = samples::three_party_structure().enumerate_all().unwrap();
        for secret in 0..3u64 {
            for r0 in 0..3u64 {
                for r1 in 0..3u64 {
                    let shares = nss.share(&[secret], &[r0, r1]).unwrap();
                    for a in &authorized {
                        assert_eq!(
                            nss.reconstruct(a, &shares).unwrap(),
                            Some(vec![secret]),
                            "secret {secret} randomness ({r0},{r1}) set {a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rates_of_sample_scheme() {
        let nss = samples::three_party_nss();
        let (share_rate, randomness_rate) = nss.rates();
        assert_eq!(share_rate, Rational::new(1, 4));
        assert_eq!(randomness_rate, Rational::new(2, 1));
    }

    #[test]
    fn share_rate_respects_structure_bound() {
        let nss = samples::three_party_nss();
        let bound = samples::three_party_structure().rate_bound().unwrap();
        assert!(nss.rates().0 <= bound);
    }

    #[test]
    fn conversion_to_program_is_lossless() {
        let nss = samples::three_party_nss();
        assert_eq!(nss.nss_to_mmsp(), samples::three_party_program());
    }

    #[test]
    fn json_round_trip_requires_kind() {
        let nss = samples::three_party_nss();
        let text = serde_json::to_string(&nss).unwrap();
        assert!(text.starts_with(r#"{"kind":"nss""#));
        let back: LinearNss = serde_json::from_str(&text).unwrap();
        assert_eq!(back, nss);

        let wrong_kind = text.replace(r#""kind":"nss""#, r#""kind":"spir""#);
        assert!(serde_json::from_str::<LinearNss>(&wrong_kind).is_err());
        let untagged = r#"{"q":3,"x":1,"y":2,"n":3,"tau":[1,2,3,3],"g":[[0,1,2],[1,1,1],[0,1,1],[1,1,0]]}"#;
        assert!(serde_json::from_str::<LinearNss>(untagged).is_err());
    }
}
