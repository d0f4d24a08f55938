use serde::{Deserialize, Serialize};
use twf_core::applications::{
    ab_ratio_check, all_minimal_bruteforce, griesmer_bound, AbRatioReport, GriesmerReport,
    MinimalityReport, DEFAULT_MINIMALITY_BUDGET,
};
use twf_core::codes::{
    compare_cwe, compare_wd, complete_weight_enumerator_with_budget, predict_cwe, predict_wd,
    weight_distribution, CodeSpec, CompleteWeightEnumerator, Comparison, Mismatch,
    WeightDistribution,
};
use twf_core::defining_sets::{build, SetKind};
use twf_core::dual::{dual_distance_upto_3, generator_matrix, pless_check, DualDistance, PlessReport};
use twf_core::gf::build_field;
use twf_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    D0,
    Dstar,
    Dlambda,
}

/// One parameter point, as given on the command line or in a grid config.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub p: u64,
    pub m: u32,
    #[serde(default)]
    pub d: Option<u64>,
    pub kind: KindArg,
    #[serde(default)]
    pub lambda: Option<u32>,
    #[serde(default)]
    pub punctured: bool,
}

/// Parameters after defaults are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolved {
    pub p: u64,
    pub m: u32,
    pub d: u64,
    pub kind: SetKind,
}

impl Point {
    pub fn resolve(&self) -> std::result::Result<Resolved, String> {
        let kind = match (self.kind, self.lambda, self.punctured) {
            (KindArg::Dlambda, None, _) => return Err("--kind dlambda needs --lambda".into()),
            (KindArg::D0 | KindArg::Dstar, Some(_), _) => {
                return Err("--lambda only applies to --kind dlambda".into())
            }
            (KindArg::D0, None, false) | (KindArg::Dlambda, Some(0), false) => SetKind::D0,
            (KindArg::D0, None, true) => SetKind::PuncturedD0,
            (KindArg::Dstar, None, false) => SetKind::DStar,
            (KindArg::Dstar, None, true) => SetKind::PuncturedDStar,
            (KindArg::Dlambda, Some(l), false) => SetKind::DLambda(l),
            (KindArg::Dlambda, Some(l), true) => SetKind::PuncturedDLambda(l),
        };
        let d = self.d.unwrap_or(match kind {
            SetKind::PuncturedD0 | SetKind::PuncturedDStar => self.p.saturating_sub(1).max(1),
            SetKind::PuncturedDLambda(_) => 2,
            _ => 1,
        });
        Ok(Resolved {
            p: self.p,
            m: self.m,
            d,
            kind,
        })
    }
}

impl Resolved {
    /// `p3-m2-d2-punctured-dlambda-l1`.
    pub fn slug(&self) -> String {
        let mut s = format!("p{}-m{}-d{}-{}", self.p, self.m, self.d, self.kind.name());
        if let SetKind::DLambda(l) | SetKind::PuncturedDLambda(l) = self.kind {
            s.push_str(&format!("-l{l}"));
        }
        s
    }

    pub fn label(&self) -> String {
        format!("C_{{{}}} p={} m={} d={}", self.kind, self.p, self.m, self.d)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub p: u64,
    pub m: u32,
    pub d: u64,
    pub kind: &'static str,
    pub lambda: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Predicted {
    pub weight_distribution: Option<WeightDistribution>,
    pub cwe: Option<CompleteWeightEnumerator>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cwe_note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenDiff {
    pub weight_distribution: Comparison<u64>,
    pub cwe: Option<Comparison<Vec<u64>>>,
}

impl GoldenDiff {
    fn is_match(&self) -> bool {
        self.weight_distribution.is_match() && self.cwe.as_ref().is_none_or(|c| c.is_match())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diff {
    pub length_matches: bool,
    pub weight_distribution: Vec<Mismatch<u64>>,
    pub cwe: Vec<Mismatch<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub golden: Option<GoldenDiff>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Projectivity {
    pub dual_distance: DualDistance,
    pub projective: bool,
    /// Projectivity is claimed for the punctured `D_0` and `D*` codes.
    pub expected: Option<DualDistance>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Minimality {
    Scanned(MinimalityReport),
    Skipped { scanned: bool, reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub input: Input,
    /// `[n, k, d_min]`.
    pub parameters: [u64; 3],
    pub weight_distribution: WeightDistribution,
    pub enumerator: String,
    pub cwe: CompleteWeightEnumerator,
    pub predicted: Predicted,
    pub diff: Diff,
    pub pless: PlessReport,
    pub projectivity: Projectivity,
    pub ab_ratio: Option<AbRatioReport>,
    pub minimality: Minimality,
    pub griesmer: GriesmerReport,
    pub failures: Vec<String>,
    pub all_match: bool,
}

impl Analysis {
    pub fn summary(&self, label: &str) -> String {
        let [n, k, d] = self.parameters;
        let mut s = format!("{label}: [{n},{k},{d}]\n  enumerated: {}\n", self.enumerator);
        if let Some(wd) = &self.predicted.weight_distribution {
            s.push_str(&format!("  predicted:  {}\n", wd.render()));
        }
        s.push_str(&format!(
            "  dual distance {}, griesmer slack {}\n",
            serde_json::to_value(self.projectivity.dual_distance)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            self.griesmer.slack
        ));
        if self.all_match {
            s.push_str("  all checks pass\n");
        } else {
            s.push_str(&format!("  FAILED: {}\n", self.failures.join(", ")));
        }
        s
    }
}

/// Golden data: a previous analysis document or a bare weight distribution.
pub fn parse_golden(
    text: &str,
) -> std::result::Result<(WeightDistribution, Option<CompleteWeightEnumerator>), String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("golden file: {e}"))?;
    let wd_value = value.get("weight_distribution").unwrap_or(&value).clone();
    let wd: WeightDistribution =
        serde_json::from_value(wd_value).map_err(|e| format!("golden weight distribution: {e}"))?;
    let cwe = match value.get("cwe") {
        Some(v) => Some(serde_json::from_value(v.clone()).map_err(|e| format!("golden cwe: {e}"))?),
        None => None,
    };
    Ok((wd, cwe))
}

pub fn analyze(
    r: &Resolved,
    budget: u128,
    golden: Option<&(WeightDistribution, Option<CompleteWeightEnumerator>)>,
) -> Result<Analysis> {
    if r.m < 2 {
        return Err(Error::DegreeTooSmall(r.m));
    }
    let field = build_field(r.p, r.m)?;
    let spec = CodeSpec::new(build(&field, r.kind, r.d)?);
    let p = field.p();
    let cwe = complete_weight_enumerator_with_budget(&spec, budget)?;
    let wd = weight_distribution(&cwe);
    let predicted_wd = predict_wd(r.kind, p, r.m)?;
    let (predicted_cwe, cwe_note) = match predict_cwe(r.kind, p, r.m) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let mut failures = Vec::new();
    let wd_cmp = compare_wd(&wd, &predicted_wd);
    if !wd_cmp.is_match() {
        failures.push("weight distribution".to_string());
    }
    let cwe_cmp = predicted_cwe.as_ref().map(|c| compare_cwe(&cwe, c));
    if cwe_cmp.as_ref().is_some_and(|c| !c.is_match()) {
        failures.push("complete weight enumerator".to_string());
    }
    let golden = golden.map(|(gwd, gcwe)| GoldenDiff {
        weight_distribution: compare_wd(&wd, gwd),
        cwe: gcwe.as_ref().map(|g| compare_cwe(&cwe, g)),
    });
    if golden.as_ref().is_some_and(|g| !g.is_match()) {
        failures.push("golden".to_string());
    }

    let pless = pless_check(&wd);
    if !pless.holds() {
        failures.push("pless moments".to_string());
    }
    let dual_distance = dual_distance_upto_3(&generator_matrix(&spec));
    let expected = matches!(r.kind, SetKind::PuncturedD0 | SetKind::PuncturedDStar)
        .then_some(DualDistance::Three);
    if expected.is_some_and(|e| e != dual_distance) {
        failures.push("dual distance".to_string());
    }

    let ab_ratio = ab_ratio_check(&wd);
    let minimality = match all_minimal_bruteforce(&spec, DEFAULT_MINIMALITY_BUDGET) {
        Ok(report) => {
            if ab_ratio.as_ref().is_some_and(|a| a.pass) && !report.all_minimal {
                failures.push("minimality".to_string());
            }
            Minimality::Scanned(report)
        }
        Err(e) => Minimality::Skipped {
            scanned: false,
            reason: e.to_string(),
        },
    };
    let d_min = wd.min_distance().unwrap_or(0);
    let griesmer = griesmer_bound(wd.n, wd.k, d_min.max(1), p as u64);
    if griesmer.slack < 0 {
        failures.push("griesmer".to_string());
    }

    Ok(Analysis {
        input: Input {
            p: r.p,
            m: r.m,
            d: r.d,
            kind: r.kind.name(),
            lambda: r.kind.lambda(),
        },
        parameters: [wd.n, wd.k as u64, d_min],
        enumerator: wd.render(),
        diff: Diff {
            length_matches: wd_cmp.length_matches
                && cwe_cmp.as_ref().is_none_or(|c| c.length_matches),
            weight_distribution: wd_cmp.mismatches,
            cwe: cwe_cmp.map(|c| c.mismatches).unwrap_or_default(),
            golden,
        },
        weight_distribution: wd,
        cwe,
        predicted: Predicted {
            weight_distribution: Some(predicted_wd),
            cwe: predicted_cwe,
            cwe_note,
        },
        pless,
        projectivity: Projectivity {
            dual_distance,
            projective: dual_distance.is_projective(),
            expected,
        },
        ab_ratio,
        minimality,
        griesmer,
        all_match: failures.is_empty(),
        failures,
    })
}

/// Every point of the built-in grid: all valid `d ≤ 2(p-1)` and all
/// nonzero `λ`, punctured and not.
pub fn default_grid() -> Vec<Point> {
    let mut points = Vec::new();
    for (p, m) in [(3u64, 2u32), (3, 3), (5, 2), (5, 3), (7, 2)] {
        for d in 1..=2 * (p - 1) {
            let scalar = d % (p - 1) == 0;
            let sign = d % 2 == 0;
            for punctured in [false, true] {
                if !punctured || scalar {
                    for kind in [KindArg::D0, KindArg::Dstar] {
                        points.push(Point { p, m, d: Some(d), kind, lambda: None, punctured });
                    }
                }
                if !punctured || sign {
                    for l in 1..p as u32 {
                        points.push(Point {
                            p,
                            m,
                            d: Some(d),
                            kind: KindArg::Dlambda,
                            lambda: Some(l),
                            punctured,
                        });
                    }
                }
            }
        }
    }
    points
}
