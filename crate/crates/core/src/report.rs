//! Certification of one instance: every applicable invariant evaluated in
//! both spaces, consistency residuals of the instance itself, and the
//! diagnostic term tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::diagnostics::{self, DiagnosticRow, Table};
use crate::invariants::{thomas_third, SpaceInvariants, CATALOGUE};
use crate::mappings::{self, Flags, MappingInstance, MappingKind};
use crate::residual::{Residual, Tolerance};
use crate::scalar::{Mode, Scalar};

/// Outcome of one comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub tag: String,
    pub residual: Residual,
    pub pass: bool,
}

/// Full report of `check` on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub dimension: usize,
    pub mode: Mode,
    pub mapping: MappingKind,
    pub flags: Flags,
    pub seed: u64,
    pub tolerance: Tolerance,
    /// Source-versus-target residual of each applicable invariant, by name.
    pub invariants: Vec<CheckRow>,
    /// Residuals that vanish for a well-formed instance.
    pub consistency: Vec<CheckRow>,
    pub diagnostics: Vec<DiagnosticRow>,
    pub pass: bool,
}

impl InvariantReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.invariants
            .iter()
            .chain(&self.consistency)
            .filter(|r| !r.pass)
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.invariants
            .iter()
            .chain(&self.consistency)
            .find(|r| r.name == name)
    }

    /// Human-readable summary, one line per row.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "instance: N={} mode={} mapping={} flags={} seed={}",
            self.dimension,
            self.mode,
            self.mapping.as_str(),
            self.flags,
            self.seed
        );
        let _ = writeln!(
            out,
            "{:<26} {:<34} {:>12} {:>12}  result",
            "check", "tag", "max_abs", "max_rel"
        );
        for r in self.invariants.iter().chain(&self.consistency) {
            let _ = writeln!(
                out,
                "{:<26} {:<34} {:>12.3e} {:>12.3e}  {}",
                r.name,
                r.tag,
                r.residual.max_abs,
                r.residual.max_rel,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        let mismatches: Vec<_> = self.diagnostics.iter().filter(|d| !d.matches).collect();
        let _ = writeln!(
            out,
            "diagnostics: {} rows, {} mismatching (informational)",
            self.diagnostics.len(),
            mismatches.len()
        );
        for d in mismatches {
            let _ = writeln!(
                out,
                "  {:<8} {:<22} {:<26} {:<20} {:>12.3e}",
                d.space, d.table, d.term, d.tag, d.residual.max_abs
            );
        }
        let _ = writeln!(out, "overall: {}", if self.pass { "pass" } else { "FAIL" });
        out
    }
}

fn row(name: &str, tag: &str, residual: Residual, mode: Mode, tol: &Tolerance) -> CheckRow {
    CheckRow {
        name: name.to_string(),
        tag: tag.to_string(),
        pass: residual.passes(mode, tol),
        residual,
    }
}

/// Evaluates every single-space invariant in the source and the image space.
pub fn evaluate_pair<S: Scalar>(
    inst: &MappingInstance<S>,
) -> Result<(SpaceInvariants<S>, SpaceInvariants<S>)> {
    Ok((
        SpaceInvariants::evaluate(&inst.source, inst.flags)?,
        SpaceInvariants::evaluate(&inst.target, inst.flags)?,
    ))
}

/// Source-versus-target residuals of the catalogue invariants applicable to
/// the instance's flags.
pub fn invariant_rows<S: Scalar>(
    inst: &MappingInstance<S>,
    source: &SpaceInvariants<S>,
    target: &SpaceInvariants<S>,
    tol: &Tolerance,
) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for spec in CATALOGUE.iter().filter(|s| (s.applies)(inst.flags)) {
        let residual = if spec.name == "thomas.third" {
            let (s, t) = (&inst.source.connection, &inst.target.connection);
            Residual::between(&thomas_third(s, t)?, &thomas_third(t, s)?)?
        } else {
            let a = source.get(spec.name).expect("catalogue entry");
            let b = target.get(spec.name).expect("catalogue entry");
            Residual::between(a, b)?
        };
        rows.push(row(spec.name, spec.tag, residual, S::MODE, tol));
    }
    Ok(rows)
}

/// Residuals that vanish for a well-formed instance.
pub fn consistency_rows<S: Scalar>(
    inst: &MappingInstance<S>,
    tol: &Tolerance,
) -> Result<Vec<CheckRow>> {
    let mode = S::MODE;
    let mut rows = Vec::new();
    if let Some(agm) = &inst.agm {
        let res = agm.source_residual(&inst.source.connection)?;
        rows.push(row(
            "agm.constraint.source",
            "pi3pbasicequations",
            Residual::of_difference(&res, agm.phi.grad().max_abs()),
            mode,
            tol,
        ));
        let fit = match agm.target_fit(&inst.target.connection) {
            Ok(fit) => Residual::of_difference(&fit.residual, agm.phi.grad().max_abs()),
            Err(Error::Degenerate(_)) => Residual::zero(),
            Err(e) => return Err(e),
        };
        rows.push(row("agm.fit.target", "pi3pbasicequations", fit, mode, tol));
    }
    if inst.flags.s1 {
        let psi = mappings::psi_residual(inst)?;
        rows.push(row(
            "instance.psi_residual",
            "LtoLtransformationrulegeneralsim",
            Residual::of_difference(&psi, inst.target.u.value().max_abs()),
            mode,
            tol,
        ));
    }
    let (dv, dg) = mappings::target_connection_residual(inst)?;
    let scale = inst.target.connection.full().value().max_abs();
    let conn = Residual::of_difference(&dv, scale).max(Residual::of_difference(&dg, scale));
    rows.push(row(
        "instance.target_connection",
        "LtoLtransformationrulegeneral",
        conn,
        mode,
        tol,
    ));
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(rows)
}

/// All diagnostic rows for an instance, source space first.
pub fn diagnostic_rows<S: Scalar>(
    inst: &MappingInstance<S>,
    source: &SpaceInvariants<S>,
    target: &SpaceInvariants<S>,
    tol: &Tolerance,
) -> Result<Vec<DiagnosticRow>> {
    let mut rows = Vec::new();
    for (label, fields, inv) in [
        ("source", &inst.source, source),
        ("target", &inst.target, target),
    ] {
        let mut table = Table::new(label, S::MODE, *tol);
        diagnostics::general_rows(fields, inst.flags, inv, &mut table)?;
        if let Some(agm) = &inst.agm {
            let data = if label == "source" {
                agm.source_data()
            } else {
                agm.target_data(&inst.target.connection)?
            };
            match diagnostics::agm_rows(&fields.connection, &data, inv, &mut table) {
                Ok(()) | Err(Error::Degenerate(_)) => {}
                Err(e) => return Err(e),
            }
        }
        rows.extend(table.into_rows());
    }
    let mut table = Table::new("pair", S::MODE, *tol);
    diagnostics::pair_rows(inst, source, target, &mut table)?;
    rows.extend(table.into_rows());
    Ok(rows)
}

/// Runs every check on an instance. The report passes iff every invariant
/// and consistency row passes; diagnostics are informational.
pub fn check_instance<S: Scalar>(
    inst: &MappingInstance<S>,
    tol: Tolerance,
) -> Result<InvariantReport> {
    check_instance_with(inst, tol, true)
}

/// As [`check_instance`]; the diagnostic tables are computed only when
/// `diagnostics` is set.
pub fn check_instance_with<S: Scalar>(
    inst: &MappingInstance<S>,
    tol: Tolerance,
    diagnostics: bool,
) -> Result<InvariantReport> {
    let (source, target) = evaluate_pair(inst)?;
    let invariants = invariant_rows(inst, &source, &target, &tol)?;
    let consistency = consistency_rows(inst, &tol)?;
    let diagnostics = if diagnostics {
        diagnostic_rows(inst, &source, &target, &tol)?
    } else {
        Vec::new()
    };
    let pass = invariants.iter().chain(&consistency).all(|r| r.pass);
    Ok(InvariantReport {
        dimension: inst.dim,
        mode: S::MODE,
        mapping: inst.kind,
        flags: inst.flags,
        seed: inst.seed,
        tolerance: tol,
        invariants,
        consistency,
        diagnostics,
        pass,
    })
}
