use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use super::files::{
    compose_lenses, load, read_json, relative_path, scenario_lens, table_lens_value, variant,
    Artifact, ComposeKind, Descriptor, LensArtifact, ModelLens,
};
use super::{CliError, Command, ComposeArgs, LearnerArgs, RunReport};
use crate::compose::{
    check_associativity, check_equivalence, check_policy_functoriality, find_equivalence,
    EquivReport, LeastChange, DEFAULT_ISO_BOUND,
};
use crate::fincat::Functor;
use crate::learner::{gradcheck, learner_put, LearnerError};
use crate::lens::{lens_put, AlaLens, Law, LawSuite, LensError, ParamGet, Point};
use crate::modelspace::{
    as_ala_lens, compare_policies, generate_scenarios, scenario_w, ModelDelta, ModelError, Policy,
    Scenario,
};

pub(super) fn dispatch(c: &Command) -> Result<RunReport, CliError> {
    match c {
        Command::Validate { path } => validate(path),
        Command::Check { path, laws, policy } => check(path, laws, policy.as_deref()),
        Command::Compose(args) => compose(args),
        Command::Assoc { k, l, m } => assoc(k, l, m),
        Command::Equiv { a, b, iota } => equiv(a, b, iota.as_deref()),
        Command::Propagate { scenario, policy } => propagate(scenario, policy.as_deref()),
        Command::Compare { scenario, policy } => compare(scenario, policy.as_deref()),
        Command::Learner(args) => learner(args),
        Command::PolicyFunctoriality { policy, files } => policy_functoriality(policy, files),
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn lens_input(e: LensError) -> CliError {
    CliError::Input(format!("{}: {e}", variant(&e)))
}

fn model_error(e: ModelError) -> CliError {
    match e {
        ModelError::BadScenario(_)
        | ModelError::SchemaMismatch { .. }
        | ModelError::InvalidModel(_) => input(e),
        other => CliError::Check(format!("{}: {other}", variant(&other))),
    }
}

fn parse_policy(s: &str) -> Result<Policy, CliError> {
    Policy::from_str(s).map_err(input)
}

fn validate(path: &Path) -> Result<RunReport, CliError> {
    let mut r = RunReport::new(format!("validate {}", path.display()));
    let art = match load(path) {
        Ok(a) => a,
        Err(CliError::Check(m)) => {
            r.check("validate", false, m);
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    r.data("kind", art.kind());
    let summary = match &art {
        Artifact::Category(c) => format!(
            "category with {} objects, {} arrows",
            c.object_count(),
            c.arrow_count()
        ),
        Artifact::PFunctor(g) => format!(
            "p-functor over {} parameters, {} → {} objects",
            g.params().object_count(),
            g.source().object_count(),
            g.target().object_count()
        ),
        Artifact::Lens(LensArtifact::Table(l)) => format!(
            "lens with {} put rows, Putget0 holds on each",
            l.rows().len()
        ),
        Artifact::Lens(LensArtifact::Model(m)) => {
            format!("database lens, {} sample points", m.points.len())
        }
        Artifact::Scenario(sc) => match sc.update() {
            Ok(w) => format!(
                "scenario: {} deleted, {} inserted in the {} view",
                w.deleted().len(),
                w.inserted().len(),
                sc.view
            ),
            Err(e) => {
                r.check("validate", false, format!("{}: {e}", variant(&e)));
                return Ok(r);
            }
        },
        Artifact::Learner(spec) => match spec.build() {
            Ok(l) => {
                let d = l.f.dims();
                format!("learner with {} parameters, {} → {}", d.k, d.m, d.n)
            }
            Err(e) => {
                r.check("validate", false, format!("{}: {e}", variant(&e)));
                return Ok(r);
            }
        },
    };
    r.check("validate", true, summary);
    Ok(r)
}

fn parse_laws(s: &str) -> Result<Vec<Law>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| Law::from_str(x).map_err(input))
        .collect()
}

fn run_laws<L: AlaLens + ?Sized>(
    r: &mut RunReport,
    suite: &LawSuite<L>,
    laws: &[Law],
) -> Result<(), CliError> {
    for &law in laws {
        let rep = suite.check(law).map_err(lens_input)?;
        let summary = format!("{} checked, {} skipped", rep.checked, rep.skipped);
        if law == Law::Putput {
            r.diagnostic(law.name(), rep.passed(), summary);
        } else {
            r.check(law.name(), rep.passed(), summary);
        }
        r.counterexamples.extend(rep.counterexamples);
    }
    Ok(())
}

fn check(path: &Path, laws: &str, policy: Option<&str>) -> Result<RunReport, CliError> {
    let laws = parse_laws(laws)?;
    let policy = policy.map(parse_policy).transpose()?;
    let mut r = RunReport::new(format!("check {}", path.display()));
    match load(path)? {
        Artifact::Lens(LensArtifact::Table(l)) => {
            let suite = LawSuite::exhaustive(&l).map_err(lens_input)?;
            run_laws(&mut r, &suite, &laws)?;
        }
        Artifact::Lens(LensArtifact::Model(m)) => check_model(&mut r, &m, &laws)?,
        Artifact::Scenario(sc) => check_model(&mut r, &scenario_lens(&sc, policy)?, &laws)?,
        other => {
            return Err(CliError::Input(format!(
                "{} is a {}, not a lens",
                path.display(),
                other.kind()
            )))
        }
    }
    Ok(r)
}

fn check_model(r: &mut RunReport, m: &ModelLens, laws: &[Law]) -> Result<(), CliError> {
    r.note(format!("sampled: {} points", m.points.len()));
    let suite = LawSuite::sampled(&m.lens, m.points.clone());
    run_laws(r, &suite, laws)
}

fn load_lens(path: &Path) -> Result<LensArtifact, CliError> {
    match load(path)? {
        Artifact::Lens(l) => Ok(l),
        other => Err(CliError::Input(format!(
            "{} is a {}, not a lens",
            path.display(),
            other.kind()
        ))),
    }
}

fn compose(args: &ComposeArgs) -> Result<RunReport, CliError> {
    let kind = if args.par {
        ComposeKind::Par
    } else {
        ComposeKind::Seq
    };
    let flag = if args.par { "--par" } else { "--seq" };
    let names: Vec<String> = args
        .inputs
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    let mut r = RunReport::new(format!("compose {flag} {}", names.join(" ")));
    let mut lenses = args.inputs.iter().map(|p| load_lens(p));
    let first = lenses.next().expect("clap requires two inputs")?;
    let composed = lenses.try_fold(first, |acc, next| compose_lenses(kind, acc, next?))?;
    let value = match &composed {
        LensArtifact::Table(l) => {
            r.check(
                "compose",
                true,
                format!("lens with {} put rows", l.rows().len()),
            );
            table_lens_value(l)
        }
        LensArtifact::Model(m) => {
            r.check(
                "compose",
                true,
                format!("database lens, {} sample points", m.points.len()),
            );
            let base = args
                .out
                .as_deref()
                .and_then(Path::parent)
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            let components = args
                .inputs
                .iter()
                .map(|p| relative_path(&base, p).display().to_string())
                .collect();
            serde_json::to_value(Descriptor {
                compose: kind,
                components,
            })
            .expect("descriptor")
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("lens file");
    match &args.out {
        Some(out) => {
            fs::write(out, text + "\n")
                .map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
            r.note(format!("wrote {}", out.display()));
        }
        None => r.data("lens", value),
    }
    Ok(r)
}

fn report_equiv(r: &mut RunReport, name: &str, rep: EquivReport) {
    r.check(
        name,
        rep.holds(),
        format!(
            "{} points checked, {} skipped, {} mismatches",
            rep.checked,
            rep.skipped,
            rep.mismatches.len()
        ),
    );
    r.counterexamples.extend(rep.mismatches);
}

fn assoc(k: &Path, l: &Path, m: &Path) -> Result<RunReport, CliError> {
    let mut r = RunReport::new(format!(
        "assoc {} {} {}",
        k.display(),
        l.display(),
        m.display()
    ));
    match (load_lens(k)?, load_lens(l)?, load_lens(m)?) {
        (LensArtifact::Table(k), LensArtifact::Table(l), LensArtifact::Table(m)) => {
            let rep = check_associativity(&k, &l, &m, None).map_err(lens_input)?;
            report_equiv(&mut r, "associativity", rep);
        }
        _ => return Err(CliError::Input("assoc compares table lenses".into())),
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IotaFile {
    obj_map: std::collections::BTreeMap<String, String>,
    arr_map: std::collections::BTreeMap<String, String>,
}

fn equiv(a: &Path, b: &Path, iota: Option<&Path>) -> Result<RunReport, CliError> {
    let mut r = RunReport::new(format!("equiv {} {}", a.display(), b.display()));
    let (LensArtifact::Table(a), LensArtifact::Table(b)) = (load_lens(a)?, load_lens(b)?) else {
        return Err(CliError::Input("equiv compares table lenses".into()));
    };
    match iota {
        Some(path) => {
            let f: IotaFile = serde_json::from_value(read_json(path)?)
                .map_err(|e| CliError::Input(format!("bad iota: {e}")))?;
            let iota =
                Functor::checked(a.params().clone(), b.params().clone(), f.obj_map, f.arr_map)
                    .map_err(|e| CliError::Input(format!("iota: {e}")))?;
            let rep = check_equivalence(&a, &b, &iota).map_err(lens_input)?;
            report_equiv(&mut r, "equivalence", rep);
        }
        None => match find_equivalence(&a, &b, DEFAULT_ISO_BOUND).map_err(lens_input)? {
            Some(iota) => {
                r.check("equivalence", true, "witness found");
                r.data(
                    "iota",
                    serde_json::json!({ "obj_map": iota.obj_map, "arr_map": iota.arr_map }),
                );
            }
            None => r.check(
                "equivalence",
                false,
                "no parameter isomorphism makes the lenses agree",
            ),
        },
    }
    Ok(r)
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    match load(path)? {
        Artifact::Scenario(s) => Ok(s),
        other => Err(CliError::Input(format!(
            "{} is a {}, not a scenario",
            path.display(),
            other.kind()
        ))),
    }
}

fn propagate(path: &Path, policy: Option<&str>) -> Result<RunReport, CliError> {
    let sc = load_scenario(path)?;
    let policy = match policy {
        Some(p) => parse_policy(p)?,
        None => sc
            .policy
            .ok_or_else(|| CliError::Input("scenario names no policy; pass --policy".into()))?,
    };
    let mut r = RunReport::new(format!(
        "propagate --scenario {} ({policy})",
        path.display()
    ));
    let vd = sc.selected_view().map_err(model_error)?;
    let theta = sc.selected_theta();
    let w = sc.update().map_err(model_error)?;
    let lens = as_ala_lens(policy, &vd);
    match lens_put(&lens, &theta, &sc.source, &w) {
        Ok(put) => {
            r.check(
                "propagate",
                true,
                format!("{policy} restores the updated view"),
            );
            r.note(format!("parameter update: {}", put.update));
            r.note(format!("deleted: {}", listing(&put.request.deleted())));
            r.note(format!("inserted: {}", listing(&put.request.inserted())));
            r.note(format!("new source: {}", put.request.to));
            r.note(format!(
                "amendment: {}",
                if put.amendment.is_identity() {
                    "identity"
                } else {
                    "non-identity"
                }
            ));
            r.data("update", &put.update);
            r.data("deleted", put.request.deleted());
            r.data("inserted", put.request.inserted());
            r.data("kept", &put.request.kept);
            r.data("source", &put.request.to);
        }
        Err(e @ (LensError::PolicyInapplicable(_) | LensError::PutgetZeroViolation { .. })) => {
            r.check("propagate", false, format!("{}: {e}", variant(&e)));
        }
        Err(e) => return Err(lens_input(e)),
    }
    Ok(r)
}

fn listing<S: AsRef<str>>(oids: &[S]) -> String {
    if oids.is_empty() {
        return "none".into();
    }
    oids.iter()
        .map(AsRef::as_ref)
        .collect::<Vec<_>>()
        .join(", ")
}

fn compare(path: &Path, policy: Option<&str>) -> Result<RunReport, CliError> {
    let sc = load_scenario(path)?;
    if sc.view != "it;ml" {
        return Err(CliError::Input(
            "compare needs a scenario on the `it;ml` view".into(),
        ));
    }
    let policies = match policy.map(parse_policy).transpose()?.or(sc.policy) {
        Some(p) => vec![p],
        None => vec![Policy::Quit, Policy::Trans],
    };
    let mut r = RunReport::new(format!("compare --scenario {}", path.display()));
    for p in policies {
        match compare_policies(&sc, p) {
            Ok(c) => {
                let summary = if c.equal {
                    "long and composed puts agree".to_string()
                } else {
                    format!("puts differ; comparison delta refines to {}", c.delta.to)
                };
                r.check(&format!("compare {p}"), c.factors, summary);
                r.note(c.to_string());
                r.data(&p.to_string(), &c);
            }
            Err(e) => r.check(
                &format!("compare {p}"),
                false,
                format!("{}: {e}", variant(&e)),
            ),
        }
    }
    Ok(r)
}

fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    serde_json::from_value(read_json(path)?).map_err(|e| {
        CliError::Input(format!(
            "{}: expected an array of numbers: {e}",
            path.display()
        ))
    })
}

fn learner(args: &LearnerArgs) -> Result<RunReport, CliError> {
    if !args.put && !args.gradcheck {
        return Err(CliError::Input("learner needs --put or --gradcheck".into()));
    }
    let spec = match load(&args.spec)? {
        Artifact::Learner(s) => s,
        other => {
            return Err(CliError::Input(format!(
                "{} is a {}, not a learner",
                args.spec.display(),
                other.kind()
            )))
        }
    };
    let ll = spec.build().map_err(input)?;
    let vectors: Vec<Vec<f64>> = args
        .files
        .iter()
        .map(|f| read_vector(f))
        .collect::<Result<_, _>>()?;
    let (p, a, b) = match vectors.as_slice() {
        [p, a, b] => (p.clone(), a.clone(), b.clone()),
        [a, b] => {
            let p = spec.params().map_err(input)?.ok_or_else(|| {
                CliError::Input("spec has no weights; pass p.json a.json b.json".into())
            })?;
            (p, a.clone(), b.clone())
        }
        _ => {
            return Err(CliError::Input(
                "expected p.json a.json b.json, or a.json b.json with weights in the spec".into(),
            ))
        }
    };
    let mut r = RunReport::new(format!("learner --spec {}", args.spec.display()));
    if args.put {
        match learner_put(&ll, &p, &a, &b) {
            Ok(put) => {
                r.check("put", true, "finite gradients");
                r.note(format!("p' = {:?}", put.p));
                r.note(format!("a' = {:?}", put.a));
                r.note(format!("amended target = {:?}", put.amendment.to));
                r.data("p", &put.p);
                r.data("a", &put.a);
                r.data("amended", &put.amendment.to);
            }
            Err(e @ LearnerError::NonFiniteGradient(..)) => r.check("put", false, e.to_string()),
            Err(e) => return Err(input(e)),
        }
    }
    if args.gradcheck {
        let g = gradcheck(ll.f.as_ref(), ll.err.as_ref(), &p, &a, &b).map_err(input)?;
        let summary = match g.worst() {
            Some(w) => format!(
                "worst relative error {:.3e} at {}[{}]",
                w.rel_err, w.wrt, w.index
            ),
            None => "no gradients".into(),
        };
        r.check("gradcheck", g.passed(), summary);
        r.note(g.to_string());
        r.data("gradcheck", &g);
    }
    Ok(r)
}

fn policy_functoriality(policy: &str, files: &[PathBuf]) -> Result<RunReport, CliError> {
    let mut r = RunReport::new(format!("policy-functoriality --policy {policy}"));
    if policy == "least-change" {
        let gets: Vec<_> = files
            .iter()
            .map(|f| match load(f)? {
                Artifact::PFunctor(g) => Ok(g),
                other => Err(CliError::Input(format!(
                    "{} is a {}, not a p-functor",
                    f.display(),
                    other.kind()
                ))),
            })
            .collect::<Result<_, _>>()?;
        let [g1, g2] = gets.as_slice() else {
            return Err(CliError::Input(
                "least-change needs two p-functor files".into(),
            ));
        };
        let rep = check_policy_functoriality(&LeastChange, g1, g2, None).map_err(lens_input)?;
        report_equiv(&mut r, "functoriality", rep);
        return Ok(r);
    }
    let pol = parse_policy(policy)?;
    let scenarios = if files.is_empty() {
        let mut s = vec![scenario_w()];
        s.extend(generate_scenarios(0, 10));
        s
    } else {
        files
            .iter()
            .map(|f| load_scenario(f))
            .collect::<Result<_, _>>()?
    };
    let (g1, g2) = (
        scenarios[0].first_view().map_err(model_error)?,
        scenarios[0].second_view().map_err(model_error)?,
    );
    let mut points: Vec<Point<crate::modelspace::RelLens>> = Vec::new();
    for sc in &scenarios {
        if sc.view != "it;ml" {
            return Err(CliError::Input(
                "scenarios must update the `it;ml` view".into(),
            ));
        }
        let theta = sc.selected_theta();
        let w = sc.update().map_err(model_error)?;
        points.push((
            theta.clone(),
            sc.source.clone(),
            ModelDelta::identity(&w.from),
        ));
        points.push((theta, sc.source.clone(), w));
    }
    let rep = check_policy_functoriality(&pol, &g1, &g2, Some(points)).map_err(lens_input)?;
    report_equiv(&mut r, "functoriality", rep);
    Ok(r)
}
