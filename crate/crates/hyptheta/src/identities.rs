//! Symbolic generation and exact cancellation of the sigma-indexed cubic
//! identities in second-order theta constants that cut out the hyperelliptic
//! locus, together with the genus-specific reductions.
//!
//! All multiplicities are exact integers; no floating point enters this
//! module's cancellation path.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chars::{enumerate, s_vector, BinaryVector, Characteristic};
use crate::error::{Error, Result};
use crate::lattice::TruncationSpec;
use crate::theta::{kummer, theta_char, CVector, PeriodMatrix};

/// A signed product of three second-order thetas.  Factors commute, so the
/// canonical form keeps them sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub sign: i8,
    pub mult: u32,
    pub factors: [BinaryVector; 3],
}

impl Monomial {
    fn new(sign: i8, factors: [BinaryVector; 3]) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Monomial { sign, mult: 1, factors }
    }

    fn sorted_factors(&self) -> [BinaryVector; 3] {
        let mut f = self.factors;
        f.sort();
        f
    }
}

/// The canonical sigma-cubic: sum of sign * mult * Theta[a]Theta[b]Theta[c] = 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicIdentity {
    pub genus: usize,
    pub sigma: BinaryVector,
    /// gcd of the raw multiplicities divided out during canonicalization.
    pub content: u64,
    pub monomials: Vec<Monomial>,
}

impl CubicIdentity {
    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Half-period data (Q, R, A_k) entering the addition identity:
/// Q = (tau alpha_0 + beta_0)/2, R = (tau alpha + beta)/2,
/// A_k = (tau alpha_k + beta_k)/2.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfPeriodSpec {
    pub alpha: BinaryVector,
    pub beta: BinaryVector,
    pub alpha0: BinaryVector,
    pub beta0: BinaryVector,
    pub alpha_k: Vec<BinaryVector>,
    pub beta_k: Vec<BinaryVector>,
}

impl HalfPeriodSpec {
    pub fn genus(&self) -> usize {
        self.alpha.len()
    }

    /// The Weierstrass choice: alpha = alpha_0 = 0, beta = beta_0 = e_1,
    /// alpha_k = s_k, beta_k = e_{k+1} with e_{g+1} = 0.
    pub fn hyperelliptic(g: usize) -> Result<Self> {
        if g < 2 || g > crate::chars::MAX_GENUS {
            return Err(Error::GenusOutOfRange { genus: g, min: 2, max: crate::chars::MAX_GENUS });
        }
        let zero = BinaryVector::zeros(g);
        let e1 = BinaryVector::basis(g, 1);
        let alpha_k = (1..=g).map(|k| s_vector(g, k).unwrap()).collect();
        let beta_k = (1..=g).map(|k| BinaryVector::basis_or_zero(g, k + 1)).collect();
        Ok(HalfPeriodSpec {
            alpha: zero,
            beta: e1,
            alpha0: zero,
            beta0: e1,
            alpha_k,
            beta_k,
        })
    }
}

/// Emit the uncanceled terms of the half-period addition identity for one
/// sigma, with everything moved to the left-hand side: the 2^g left terms
/// keep sign +, the g*2^g middle terms and the 2^g final terms enter with
/// sign - times their printed sign factors.
pub fn raw_terms_addhyp(spec: &HalfPeriodSpec, sigma: &BinaryVector) -> Result<Vec<Monomial>> {
    let g = spec.genus();
    if sigma.len() != g
        || spec.alpha_k.len() != g
        || spec.beta_k.len() != g
        || [&spec.beta, &spec.alpha0, &spec.beta0].iter().any(|v| v.len() != g)
    {
        return Err(Error::DimensionMismatch("half-period spec genus mismatch".into()));
    }
    let sgn = |parity: u8| if parity == 0 { 1i8 } else { -1i8 };
    let alpha_alpha0 = spec.alpha ^ spec.alpha0;
    let beta_beta0 = spec.beta ^ spec.beta0;
    let mut terms = Vec::with_capacity((g + 2) << g);
    for eps in enumerate(g) {
        // left side: (-1)^{(eps, beta+beta0)} Th[eps+alpha+alpha0] Th[eps] Th[sigma+alpha]
        terms.push(Monomial::new(
            sgn(eps.dot(&beta_beta0)?),
            [eps ^ alpha_alpha0, eps, *sigma ^ spec.alpha],
        ));
        // middle sum over k: -(-1)^{(eps, beta+beta0+beta_k) + (sigma, beta_k)}
        //   Th[eps+alpha+alpha0] Th[eps+alpha_k] Th[sigma+alpha+alpha_k]
        for k in 0..g {
            let p = (eps.dot(&(beta_beta0 ^ spec.beta_k[k]))? + sigma.dot(&spec.beta_k[k])?) % 2;
            terms.push(Monomial::new(
                -sgn(p),
                [
                    eps ^ alpha_alpha0,
                    eps ^ spec.alpha_k[k],
                    *sigma ^ spec.alpha ^ spec.alpha_k[k],
                ],
            ));
        }
        // final sum: -(-1)^{(eps, beta) + (sigma, beta0)}
        //   Th[eps+alpha] Th[eps] Th[sigma+alpha+alpha0]
        let p = (eps.dot(&spec.beta)? + sigma.dot(&spec.beta0)?) % 2;
        terms.push(Monomial::new(
            -sgn(p),
            [eps ^ spec.alpha, eps, *sigma ^ spec.alpha ^ spec.alpha0],
        ));
    }
    Ok(terms)
}

/// Merge equal factor multisets, drop canceled terms, divide out the content
/// and sort.  The overall sign is normalized so the lexicographically first
/// monomial is positive (an identity is insensitive to a global sign, and
/// this matches the printed genus-3 and genus-4 forms).
pub fn canonicalize(genus: usize, sigma: BinaryVector, terms: &[Monomial]) -> CubicIdentity {
    let mut merged: BTreeMap<[BinaryVector; 3], i64> = BTreeMap::new();
    for t in terms {
        *merged.entry(t.sorted_factors()).or_insert(0) += t.sign as i64 * t.mult as i64;
    }
    merged.retain(|_, v| *v != 0);
    let content = merged.values().fold(0u64, |acc, v| gcd(acc, v.unsigned_abs()));
    let content = if content == 0 { 1 } else { content };
    let flip = merged
        .iter()
        .next()
        .map(|(_, &v)| if v < 0 { -1i64 } else { 1i64 })
        .unwrap_or(1);
    let monomials = merged
        .into_iter()
        .map(|(factors, coeff)| {
            let c = coeff * flip;
            Monomial {
                sign: if c < 0 { -1 } else { 1 },
                mult: (c.unsigned_abs() / content) as u32,
                factors,
            }
        })
        .collect();
    CubicIdentity { genus, sigma, content, monomials }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The full sigma-indexed family for the Weierstrass half-period choice,
/// in `enumerate(g)` order.
pub fn gen_cubics(g: usize) -> Result<Vec<CubicIdentity>> {
    if !(2..=6).contains(&g) {
        return Err(Error::GenusOutOfRange { genus: g, min: 2, max: 6 });
    }
    let spec = HalfPeriodSpec::hyperelliptic(g)?;
    enumerate(g)
        .into_iter()
        .map(|sigma| Ok(canonicalize(g, sigma, &raw_terms_addhyp(&spec, &sigma)?)))
        .collect()
}

/// Evaluate the factored genus-3 form against the canonical sigma-cubic:
/// cubic(z) = Theta[101+sigma](z) * theta[101;111](2z) * theta[101;111](0) / 2.
/// Returns the normalized difference of the two routes.
pub fn factor_check_genus3(
    tau: &PeriodMatrix,
    sigma: &BinaryVector,
    z: &CVector,
    spec: &TruncationSpec,
) -> Result<f64> {
    if tau.genus() != 3 || sigma.len() != 3 {
        return Err(Error::GenusOutOfRange { genus: tau.genus(), min: 3, max: 3 });
    }
    let cubics = gen_cubics(3)?;
    let cubic = &cubics[sigma.index()];
    let table = kummer(tau, z, spec)?;
    let mut value = num_complex::Complex64::new(0.0, 0.0);
    for m in &cubic.monomials {
        let prod = table.get(&m.factors[0]) * table.get(&m.factors[1]) * table.get(&m.factors[2]);
        value += (m.sign as f64) * (m.mult as f64) * prod;
    }
    let c: Characteristic = "[101;111]".parse().unwrap();
    let z2 = z.map(|x| 2.0 * x);
    let null = theta_char(tau, &CVector::zeros(3), &c, spec)?.value;
    let at_2z = theta_char(tau, &z2, &c, spec)?.value;
    let eps: BinaryVector = "101".parse().unwrap();
    let factored = 0.5 * table.get(&(eps ^ *sigma)) * at_2z * null;
    Ok((value - factored).norm() / (1.0 + value.norm() + factored.norm()))
}

/// Paper-derived fixtures for the genus-3 sigma=000 cubic and the genus-4
/// sigma=0000 and sigma=0001 cubics, as (sign, [factors]) with unit
/// multiplicity.
pub mod fixtures {
    pub const GENUS3_SIGMA_000: &[(i8, [&str; 3])] = &[
        (1, ["000", "101", "101"]),
        (-1, ["001", "100", "101"]),
        (-1, ["010", "101", "111"]),
        (1, ["011", "101", "110"]),
    ];

    pub const GENUS4_SIGMA_0000: &[(i8, [&str; 3])] = &[
        (1, ["0000", "1001", "1001"]),
        (1, ["0000", "1010", "1010"]),
        (1, ["0000", "1011", "1011"]),
        (1, ["0000", "1101", "1101"]),
        (1, ["0011", "1101", "1110"]),
        (1, ["0101", "1000", "1101"]),
        (1, ["0101", "1011", "1110"]),
        (1, ["0110", "1010", "1100"]),
        (1, ["0111", "1001", "1110"]),
        (1, ["0111", "1011", "1100"]),
        (-1, ["0001", "1000", "1001"]),
        (-1, ["0001", "1100", "1101"]),
        (-1, ["0010", "1000", "1010"]),
        (-1, ["0010", "1101", "1111"]),
        (-1, ["0011", "1000", "1011"]),
        (-1, ["0100", "1010", "1110"]),
        (-1, ["0100", "1011", "1111"]),
        (-1, ["0101", "1001", "1100"]),
        (-1, ["0101", "1010", "1111"]),
        (-1, ["0110", "1001", "1111"]),
    ];

    pub const GENUS4_SIGMA_0001: &[(i8, [&str; 3])] = &[
        (1, ["0000", "1000", "1001"]),
        (1, ["0000", "1100", "1101"]),
        (1, ["0010", "1001", "1010"]),
        (1, ["0011", "1001", "1011"]),
        (1, ["0011", "1100", "1110"]),
        (1, ["0100", "1000", "1101"]),
        (1, ["0100", "1011", "1110"]),
        (1, ["0101", "1010", "1110"]),
        (1, ["0101", "1011", "1111"]),
        (1, ["0111", "1000", "1110"]),
        (-1, ["0001", "1000", "1000"]),
        (-1, ["0001", "1010", "1010"]),
        (-1, ["0001", "1011", "1011"]),
        (-1, ["0001", "1100", "1100"]),
        (-1, ["0010", "1100", "1111"]),
        (-1, ["0100", "1001", "1100"]),
        (-1, ["0100", "1010", "1111"]),
        (-1, ["0110", "1000", "1111"]),
        (-1, ["0110", "1010", "1101"]),
        (-1, ["0111", "1011", "1101"]),
    ];
}

fn fixture_identity(g: usize, sigma: &str, rows: &[(i8, [&str; 3])]) -> CubicIdentity {
    let terms: Vec<Monomial> = rows
        .iter()
        .map(|(sign, fs)| {
            Monomial::new(
                *sign,
                [fs[0].parse().unwrap(), fs[1].parse().unwrap(), fs[2].parse().unwrap()],
            )
        })
        .collect();
    canonicalize(g, sigma.parse().unwrap(), &terms)
}

/// Compare generated cubics against the stored printed fixtures; reports the
/// first differing monomial on mismatch.
pub fn check_fixtures() -> Result<()> {
    let cases: [(usize, &str, &[(i8, [&str; 3])]); 3] = [
        (3, "000", fixtures::GENUS3_SIGMA_000),
        (4, "0000", fixtures::GENUS4_SIGMA_0000),
        (4, "0001", fixtures::GENUS4_SIGMA_0001),
    ];
    for (g, sigma, rows) in cases {
        let family = gen_cubics(g)?;
        let sig: BinaryVector = sigma.parse().unwrap();
        let got = &family[sig.index()];
        let want = fixture_identity(g, sigma, rows);
        if got.monomials != want.monomials {
            let detail = got
                .monomials
                .iter()
                .zip(want.monomials.iter())
                .find(|(a, b)| a != b)
                .map(|(a, b)| format!("generated {a:?} vs printed {b:?}"))
                .unwrap_or_else(|| {
                    format!(
                        "monomial counts differ: {} vs {}",
                        got.monomials.len(),
                        want.monomials.len()
                    )
                });
            return Err(Error::FixtureMismatch { sigma: sigma.to_string(), detail });
        }
    }
    Ok(())
}
