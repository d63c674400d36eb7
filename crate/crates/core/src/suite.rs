//! Multi-draw runs: the single-space identity suite and seeded invariance
//! checks. Draws are evaluated in parallel; results are sorted so a run is
//! deterministic given its seeds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::curvature_trace;
use crate::error::{Error, Result};
use crate::invariants::agm::agm_closed_forms;
use crate::invariants::{first_trace, last_trace, skew, sym_half, FactoredObjects};
use crate::mappings::{generate, generate_agm3, Flags, GenOptions, MappingInstance, MappingKind};
use crate::report::{check_instance_with, InvariantReport};
use crate::residual::{Residual, Tolerance};
use crate::scalar::{Mode, Scalar};
use crate::tensor::Slot;

/// Parameters of one generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub dim: usize,
    pub seed: u64,
    pub kind: MappingKind,
    /// Used by `general` only; the other kinds fix their own flags.
    pub flags: Flags,
    /// Kind of the almost geodesic mapping, `agm3` only.
    pub p: u8,
    pub literal_p2: bool,
}

impl Case {
    pub fn general(dim: usize, seed: u64, flags: Flags) -> Self {
        Self {
            dim,
            seed,
            kind: MappingKind::General,
            flags,
            p: 1,
            literal_p2: false,
        }
    }

    pub fn geodesic(dim: usize, seed: u64) -> Self {
        Self {
            kind: MappingKind::Geodesic,
            ..Self::general(dim, seed, Flags::geodesic())
        }
    }

    pub fn agm3(dim: usize, seed: u64, p: u8) -> Self {
        Self {
            kind: MappingKind::Agm3,
            p,
            ..Self::general(dim, seed, Flags::agm3())
        }
    }

    pub fn generate<S: Scalar>(&self) -> Result<MappingInstance<S>> {
        match self.kind {
            MappingKind::Agm3 => generate_agm3(self.dim, self.seed, self.p, self.literal_p2),
            kind => generate(GenOptions {
                dim: self.dim,
                seed: self.seed,
                flags: self.flags,
                kind,
            }),
        }
    }

    fn sort_key(&self) -> (usize, &'static str, bool, bool, bool, u8, u64) {
        let f = self.flags;
        (
            self.dim,
            self.kind.as_str(),
            f.s1,
            f.s2,
            f.s3,
            self.p,
            self.seed,
        )
    }
}

/// Generates and checks every case in parallel. Reports come back in the
/// order of (dimension, mapping, flags, p, seed).
pub fn check_cases<S: Scalar>(
    cases: &[Case],
    tol: Tolerance,
    diagnostics: bool,
) -> Result<Vec<(Case, InvariantReport)>> {
    let mut out = cases
        .par_iter()
        .map(|case| {
            let inst = case.generate::<S>()?;
            Ok((*case, check_instance_with(&inst, tol, diagnostics)?))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    Ok(out)
}

/// One identity evaluated on one draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub identity: String,
    pub tag: String,
    pub dimension: usize,
    pub seed: u64,
    pub residual: Residual,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub mode: Mode,
    pub tolerance: Tolerance,
    /// Sorted by identity name, then dimension, then seed.
    pub rows: Vec<IdentityRow>,
    pub pass: bool,
}

impl IdentityReport {
    /// One line per identity: draws passed and the largest residual.
    pub fn render_table(&self) -> String {
        let mut out = format!("identity suite ({} mode)\n", self.mode);
        out.push_str(&format!(
            "{:<28} {:<24} {:>7} {:>12}  result\n",
            "identity", "tag", "passed", "max_abs"
        ));
        let mut names: Vec<&str> = self.rows.iter().map(|r| r.identity.as_str()).collect();
        names.dedup();
        for name in names {
            let rows: Vec<_> = self.rows.iter().filter(|r| r.identity == name).collect();
            let passed = rows.iter().filter(|r| r.pass).count();
            let worst = rows.iter().map(|r| r.residual.max_abs).fold(0.0, f64::max);
            out.push_str(&format!(
                "{:<28} {:<24} {:>3}/{:<3} {:>12.3e}  {}\n",
                name,
                rows[0].tag,
                passed,
                rows.len(),
                worst,
                if passed == rows.len() { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.pass { "pass" } else { "FAIL" }
        ));
        out
    }
}

/// Residuals of the single-space identities on one draw, as `(name, tag, residual)`.
fn draw_identities<S: Scalar>(
    dim: usize,
    seed: u64,
) -> Result<Vec<(&'static str, &'static str, Residual)>> {
    let inst = generate::<S>(GenOptions {
        dim,
        seed,
        flags: Flags::all()[7],
        kind: MappingKind::General,
    })?;
    let fields = &inst.source;
    let space = &fields.connection;
    let r = space.curvature();
    let obj = FactoredObjects::compute(fields, Flags::all()[7])?;
    let rho_skew = skew(&obj.rho);

    let mut rows = vec![
        (
            "curvature.trace",
            "Wbasicfactored**",
            Residual::between(&curvature_trace(r)?, &space.skew_ricci().scale(&-S::one()))?,
        ),
        (
            "curvature.antisymmetry",
            "Rijmn=-Rijnm",
            Residual::between(
                r,
                &r.swap_slots(Slot::Lower(1), Slot::Lower(2))?
                    .scale(&-S::one()),
            )?,
        ),
        (
            "s_tilde.symmetry",
            "Wbasicfactored****",
            Residual::between(
                &obj.s_tilde,
                &obj.s_tilde.swap_slots(Slot::Lower(0), Slot::Lower(1))?,
            )?,
        ),
        (
            "a_tensor.first_trace",
            "Wbasicfactored******",
            Residual::between(&first_trace(&obj.a_tensor)?, &rho_skew.scale(&-S::one()))?,
        ),
        (
            "a_tensor.last_trace_skew",
            "Wbasicfactored******x",
            Residual::between(&skew(&last_trace(&obj.a_tensor)?), &rho_skew)?,
        ),
    ];

    for p in [1u8, 2] {
        let agm = generate_agm3::<S>(dim, seed, p, false)?;
        let block = agm.agm.as_ref().expect("agm3 instances carry their block");
        let closed = agm_closed_forms(&agm.source.connection, &block.source_data())?;
        let d = &closed.decomposition;
        let (recon, trace) = if p == 1 {
            ("agm.reconstruction.p1", "agm.trace_sym.p1")
        } else {
            ("agm.reconstruction.p2", "agm.trace_sym.p2")
        };
        rows.push((
            recon,
            "A(P,Q)",
            Residual::between(&d.reconstruct()?, &closed.a_second)?,
        ));
        rows.push((
            trace,
            "A(P,Q)i=nsim",
            Residual::between(&d.trace_sym()?, &sym_half(&last_trace(&closed.a_second)?))?,
        ));
    }
    Ok(rows)
}

/// Runs the identity suite on `count` draws (seeds `seed .. seed + count`)
/// for each dimension.
pub fn identity_suite<S: Scalar>(
    dims: &[usize],
    seed: u64,
    count: u64,
    tol: Tolerance,
) -> Result<IdentityReport> {
    if dims.iter().any(|&n| n < 2) {
        return Err(Error::Shape("identity suite needs N >= 2".into()));
    }
    let draws: Vec<(usize, u64)> = dims
        .iter()
        .flat_map(|&n| (seed..seed + count).map(move |s| (n, s)))
        .collect();
    let per_draw = draws
        .par_iter()
        .map(|&(n, s)| {
            Ok(draw_identities::<S>(n, s)?
                .into_iter()
                .map(|(identity, tag, residual)| IdentityRow {
                    identity: identity.to_string(),
                    tag: tag.to_string(),
                    dimension: n,
                    seed: s,
                    pass: residual.passes(S::MODE, &tol),
                    residual,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<IdentityRow> = per_draw.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (&a.identity, a.dimension, a.seed).cmp(&(&b.identity, b.dimension, b.seed))
    });
    let pass = rows.iter().all(|r| r.pass);
    Ok(IdentityReport {
        mode: S::MODE,
        tolerance: tol,
        rows,
        pass,
    })
}
