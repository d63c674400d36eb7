//! Formulas of the invariant theory typed in index notation, each paired
//! with the hand-coded operation that computes the same tensor.

use geoinv::index_expr::{eval_str, Env};
use geoinv::invariants::{
    delta_bracket, thomas_basic, weyl_basic, weyl_factored, weyl_fourth, FactoredObjects,
};
use geoinv::mappings::MappingInstance;
use geoinv::{Rational, Result, Tensor};

pub struct FormulaCheck {
    pub name: &'static str,
    pub tag: &'static str,
    pub source: String,
    pub matches: bool,
}

/// Evaluates every formula of the corpus in the source space of `inst`.
pub fn check_corpus(inst: &MappingInstance<Rational>) -> Result<Vec<FormulaCheck>> {
    let fields = &inst.source;
    let space = &fields.connection;
    let obj = FactoredObjects::compute(fields, inst.flags)?;
    let env = Env::for_space(fields, inst.flags, Some(&inst.xi), None)?;
    let n = inst.dim;
    let (n1, n1sq, nm1) = (n + 1, (n + 1) * (n + 1), n - 1);

    let corpus: Vec<(&'static str, &'static str, String, Tensor<Rational>)> = vec![
        ("ricci", "R", "R{a;jma}".into(), space.ricci().clone()),
        (
            "curvature_trace",
            "Wbasicfactored**",
            "R{a;aij} + alt(R{;ij}; i, j)".into(),
            Tensor::zeros(n, geoinv::Valence::new(0, 2)),
        ),
        (
            "delta_bracket",
            "condinv4",
            "alt(d{i;m} * rho{;jn}; m, n)".into(),
            delta_bracket(&obj.rho)?,
        ),
        ("thomas_basic", "basicThomas", "Ls{i;jk} - omega{i;jk}".into(), thomas_basic(space, &obj.omega)?),
        (
            "omega",
            "omegageneral",
            format!("Omega{{i;jk}} + (d{{i;j}} * tau{{;k}} + d{{i;k}} * tau{{;j}}) / {n1}"),
            obj.omega.value().clone(),
        ),
        ("rho", "Wbasicfactoredrho", "cd(Omega{a;ia}; j)".into(), obj.rho.clone()),
        (
            "s_tilde",
            "WbasicfactoredS",
            format!("{n1} * tau{{;a}} * Omega{{a;ij}} + tau{{;i}} * tau{{;j}}"),
            obj.s_tilde.clone(),
        ),
        (
            "weyl_basic",
            "Wbasic",
            "R{i;jmn} - cd(omega{i;jm}; n) + cd(omega{i;jn}; m) \
             + omega{a;jm} * omega{i;an} - omega{a;jn} * omega{i;am}"
                .into(),
            weyl_basic(space, &obj.omega)?,
        ),
        (
            "weyl_factored",
            "Wbasicfactoredfinal",
            format!(
                "R{{i;jmn}} + A{{i;jmn}} \
                 - (alt(d{{i;m}} * cd(theta{{;j}}; n); m, n) - alt(d{{i;m}} * rho{{;jn}}; m, n)) / {n1} \
                 - alt(d{{i;m}} * S{{;jn}}; m, n) / {n1sq}"
            ),
            weyl_factored(space, &obj),
        ),
        (
            "weyl_fourth",
            "FW4",
            format!(
                "R{{i;jmn}} + A{{i;jmn}} \
                 + alt(d{{i;m}} * (sym(R{{;jn}}; j, n) + sym(A{{a;jna}}; j, n)); m, n) / {nm1}"
            ),
            weyl_fourth(space, &obj),
        ),
    ];

    corpus
        .into_iter()
        .map(|(name, tag, source, want)| {
            let got = eval_str(&source, &env)?;
            Ok(FormulaCheck {
                name,
                tag,
                matches: got.tensor == want,
                source,
            })
        })
        .collect()
}
