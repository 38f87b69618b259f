//! Arc certificates: a JSON document carrying the field, the point set and
//! the claims a verifier must reproduce from the points alone.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use kmarc_core::arcs::{verify_km, KMArc};
use kmarc_core::f2linalg::Subgroup;
use kmarc_core::gf2e::{FieldCtx, FieldElement};
use kmarc_core::plane::{incident, ProjLine, ProjPoint};
use kmarc_core::symmetry::{is_elation_arc, stabilizer};
use kmarc_core::{Error, Result};

pub const SCHEMA: &str = "kmarc-certificate/1";

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FieldSpec {
    pub h: u32,
    /// irreducible modulus as lowercase hex of its bit mask
    pub modulus: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct Claims {
    pub t: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nucleus: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elation_line: Option<[String; 3]>,
    /// echelon basis of the section subgroup on the claimed elation line
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizer_order: Option<u64>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Certificate {
    pub schema: String,
    pub field: FieldSpec,
    pub points: Vec<[String; 3]>,
    pub claims: Claims,
    pub provenance: String,
}

fn triple_to_hex(coords: [FieldElement; 3]) -> [String; 3] {
    [coords[0].to_hex(), coords[1].to_hex(), coords[2].to_hex()]
}

fn triple_from_hex(ctx: &FieldCtx, t: &[String; 3]) -> Result<[FieldElement; 3]> {
    let parse = |s: &String| -> Result<FieldElement> {
        let e = FieldElement::from_hex(s)?;
        ctx.try_el(e.bits())
    };
    Ok([parse(&t[0])?, parse(&t[1])?, parse(&t[2])?])
}

impl Certificate {
    /// Build a certificate from a verified arc, deriving the elation claims
    /// from the coset criterion.
    pub fn from_arc(
        ctx: &FieldCtx,
        arc: &KMArc,
        family: &str,
        parameters: BTreeMap<String, String>,
        provenance: String,
    ) -> Result<Certificate> {
        let report = is_elation_arc(ctx, arc)?;
        let (elation_line, subgroup) = match report.elation_lines.first() {
            Some((line, s)) => (
                Some(triple_to_hex(line.coeffs())),
                Some(s.basis().iter().map(|b| b.to_hex()).collect()),
            ),
            None => (None, None),
        };
        Ok(Certificate {
            schema: SCHEMA.to_string(),
            field: FieldSpec { h: ctx.h(), modulus: format!("{:x}", ctx.modulus()) },
            points: arc.points().iter().map(|p| triple_to_hex(p.coords())).collect(),
            claims: Claims {
                t: arc.t(),
                nucleus: arc.nucleus().map(|n| triple_to_hex(n.coords())),
                elation_line,
                subgroup,
                family: Some(family.to_string()),
                parameters: if parameters.is_empty() { None } else { Some(parameters) },
                stabilizer_order: None,
            },
            provenance,
        })
    }

    pub fn context(&self) -> Result<FieldCtx> {
        let modulus = u32::from_str_radix(&self.field.modulus, 16)
            .map_err(|_| Error::Argument(format!("bad modulus hex {:?}", self.field.modulus)))?;
        FieldCtx::with_modulus(self.field.h, modulus)
    }

    pub fn points(&self, ctx: &FieldCtx) -> Result<Vec<ProjPoint>> {
        self.points
            .iter()
            .map(|t| ProjPoint::new(ctx, triple_from_hex(ctx, t)?))
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Argument(format!("serialization: {e}")))?;
        std::fs::write(path, body + "\n")
            .map_err(|e| Error::Argument(format!("writing {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Certificate> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("reading {}: {e}", path.display())))?;
        let cert: Certificate = serde_json::from_str(&body)
            .map_err(|e| Error::Argument(format!("parsing {}: {e}", path.display())))?;
        if cert.schema != SCHEMA {
            return Err(Error::Argument(format!("unknown schema {:?}", cert.schema)));
        }
        Ok(cert)
    }

    /// Load and rebuild the verified arc (census included).
    pub fn load_arc(path: &Path) -> Result<(FieldCtx, KMArc, Certificate)> {
        let cert = Certificate::load(path)?;
        let ctx = cert.context()?;
        let arc = KMArc::from_points(&ctx, cert.points(&ctx)?)?;
        Ok((ctx, arc, cert))
    }
}

/// Outcome of re-deriving all claims from the points.
pub struct VerifyOutcome {
    pub t: u32,
    pub secant_count: u32,
    pub histogram: Vec<(u32, u64)>,
    pub checked_stabilizer: Option<u64>,
}

/// Re-verify every claim of a certificate; the first mismatch is an error
/// whose message names the witness.
pub fn verify_certificate(cert: &Certificate, budget: u64) -> Result<VerifyOutcome> {
    let ctx = cert.context()?;
    let points = cert.points(&ctx)?;
    let report = verify_km(&ctx, &points);
    if !report.is_km {
        let why = report
            .failure
            .as_ref()
            .map(|f| f.describe())
            .unwrap_or_else(|| "census failed".into());
        return Err(Error::NotAKmArc(why));
    }
    let t = report.t.unwrap();
    if t != cert.claims.t {
        return Err(Error::NotAKmArc(format!(
            "census type {t} does not match the claimed {}",
            cert.claims.t
        )));
    }
    match (&cert.claims.nucleus, report.nucleus) {
        (Some(claimed), Some(found)) => {
            if triple_from_hex(&ctx, claimed)? != found.coords() {
                return Err(Error::NotAKmArc(format!(
                    "nucleus claim {claimed:?} does not match the census"
                )));
            }
        }
        (None, None) => {}
        (Some(_), None) => {
            return Err(Error::NotAKmArc("claimed nucleus on a hyperoval".into()))
        }
        (None, Some(_)) => {
            return Err(Error::NotAKmArc("census found a nucleus the claims omit".into()))
        }
    }
    let arc = KMArc::from_report(&ctx, points, &report)?;
    if let Some(line_hex) = &cert.claims.elation_line {
        let line = ProjLine::new(&ctx, triple_from_hex(&ctx, line_hex)?)?;
        let elation = is_elation_arc(&ctx, &arc)?;
        let found = elation
            .elation_lines
            .iter()
            .find(|(l, _)| *l == line)
            .ok_or_else(|| {
                Error::NotAKmArc(format!("claimed elation line {line_hex:?} fails the coset test"))
            })?;
        if let Some(basis_hex) = &cert.claims.subgroup {
            let claimed: Subgroup = kmarc_core::f2linalg::span(
                ctx.h(),
                &basis_hex
                    .iter()
                    .map(|s| FieldElement::from_hex(s).and_then(|e| ctx.try_el(e.bits())))
                    .collect::<Result<Vec<_>>>()?,
            );
            if claimed != found.1 {
                return Err(Error::NotAKmArc("claimed section subgroup mismatch".into()));
            }
        }
        // elation lines must be t-secants
        let hits = arc.points().iter().filter(|p| incident(&ctx, p, &line)).count();
        if hits != t as usize {
            return Err(Error::NotAKmArc("claimed elation line is not a t-secant".into()));
        }
    }
    let checked_stabilizer = match cert.claims.stabilizer_order {
        Some(order) => {
            let rep = stabilizer(&ctx, &arc, budget)?;
            if rep.order != order {
                return Err(Error::NotAKmArc(format!(
                    "stabilizer order {} does not match the claimed {order}",
                    rep.order
                )));
            }
            Some(rep.order)
        }
        None => None,
    };
    Ok(VerifyOutcome {
        t,
        secant_count: report.secant_count,
        histogram: report.histogram.iter().map(|(&m, &c)| (m, c)).collect(),
        checked_stabilizer,
    })
}
