//! One function per subcommand.

use std::path::Path;

use serde_json::json;

use hat_core::check::Check;
use hat_core::concentric::{catalog, check_concentric, find_concentric_sequence, CatalogEntry, ConcentricError, ConcentricSequence};
use hat_core::construct::mn::{build_mn_instance, MnError};
use hat_core::construct::wreath::{build_wreath_instance, check_c1_c4, verify_wreath_theorem, vertex_count, WreathError};
use hat_core::format;
use hat_core::graph::{
    cayley_graph, cayley_normality_report, classify_basic, graph_automorphism_group, materialize_coset_graph,
    normal_quotient, transitivity_report, BasicType, CoverLemma, Graph, NormalSource,
};
use hat_core::presentation::todd_coxeter;
use hat_core::subgroup::{double_cosets_equal, index_of_self_intersection};
use hat_core::{ElementSet, PermutationGroup, Permutation};

use crate::{read_file, write_file, BuildCmd, CertificateDocument, CliError, Command, ConcentricCmd, GraphCmd, MnArgs, Outcome, PermCmd, PresentCmd, Settings};

/// Reading of the undefined index in the second defining equation of `tau_h`.
const A_M_NOTE: &str = "tau_h is defined on a_m b with a_m read as a_n, the last generator";

pub(crate) fn dispatch(cmd: &Command, s: &Settings) -> Result<Outcome, CliError> {
    match cmd {
        Command::Concentric(c) => concentric(c, s),
        Command::Present(PresentCmd::Enumerate { pres, grp_out }) => present(pres, grp_out.as_deref(), s),
        Command::Construct(BuildCmd::Mn(a)) => mn(a, s, false),
        Command::Verify(BuildCmd::Mn(a)) => mn(a, s, true),
        Command::Construct(BuildCmd::Wreath { wri }) => wreath(wri, s, false),
        Command::Verify(BuildCmd::Wreath { wri }) => wreath(wri, s, true),
        Command::Graph(g) => graph(g, s),
        Command::Perm(PermCmd::Order { grp }) => perm_order(grp, s),
    }
}

fn certificate(doc: CertificateDocument) -> Outcome {
    Outcome {
        falsified: !doc.passed(),
        text: doc.to_json(),
    }
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn load_group(path: &Path, s: &Settings, doc: &mut CertificateDocument) -> Result<PermutationGroup, CliError> {
    let (text, hash) = read_file(path)?;
    doc.inputs.push(hash);
    let f = format::parse_group(&text).map_err(|e| input_err(path, e))?;
    if f.generators.is_empty() {
        return Ok(PermutationGroup::trivial(f.degree));
    }
    PermutationGroup::with_seed(f.generators, s.seed).map_err(|e| input_err(path, e))
}

fn load_graph(path: &Path, doc: &mut CertificateDocument) -> Result<Graph, CliError> {
    let (text, hash) = read_file(path)?;
    doc.inputs.push(hash);
    format::parse_graph(&text).map_err(|e| input_err(path, e))
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn concentric_checks(seq: &ConcentricSequence, seed: u64) -> Vec<Check> {
    let phi = seq.verify_phi_homomorphism(seed);
    vec![
        Check::new("involutions", "every a_i is an involution", true, None),
        Check::new("windows", "|<a_i..a_j>| = 2^(j-i+1)", true, None),
        Check::new(
            "phi_homomorphism",
            "the shift a_i -> a_{i+1} extends to an isomorphism B -> C",
            phi.is_ok(),
            Some(match &phi {
                Ok(pairs) => format!("{pairs} pairs checked"),
                Err((x, y)) => format!("fails on ({x}, {y})"),
            }),
        ),
    ]
}

fn concentric(cmd: &ConcentricCmd, s: &Settings) -> Result<Outcome, CliError> {
    match cmd {
        ConcentricCmd::Check { grp } => {
            let mut doc = CertificateDocument::new("concentric check");
            let g = load_group(grp, s, &mut doc)?;
            match check_concentric(g.generators()) {
                Ok(seq) => {
                    doc.checks = concentric_checks(&seq, s.seed);
                    doc.data = json!({ "n": seq.n(), "degree": seq.degree(), "order": seq.h_set().len() });
                }
                Err(ConcentricError::Rejected(r)) => {
                    doc.checks.push(Check::new("concentric", "the sequence is concentric", false, Some(r.to_string())));
                }
                Err(e) => return Err(input_err(grp, e)),
            }
            Ok(certificate(doc))
        }
        ConcentricCmd::Search { grp, n } => {
            let mut doc = CertificateDocument::new("concentric search");
            let g = load_group(grp, s, &mut doc)?;
            let set = g.enumerate_elements(s.max_elements).map_err(failed)?;
            if !set.len().is_power_of_two() {
                return Err(input_err(grp, format!("group order {} is not a power of two", set.len())));
            }
            let n = n.unwrap_or(set.len().trailing_zeros() as usize);
            match find_concentric_sequence(&set, n).map_err(failed)? {
                Some(seq) => Ok(Outcome {
                    text: format::write_concentric(&seq),
                    falsified: false,
                }),
                None => {
                    doc.checks.push(Check::new(
                        "sequence_found",
                        "the group has a concentric generating sequence",
                        false,
                        Some(format!("exhaustive search for n = {n} found none")),
                    ));
                    Ok(certificate(doc))
                }
            }
        }
        ConcentricCmd::Catalog { name } => {
            let entry: CatalogEntry = name.parse().map_err(|e: ConcentricError| CliError::Usage(e.to_string()))?;
            let seq = catalog(entry).map_err(failed)?;
            Ok(Outcome {
                text: format::write_concentric(&seq),
                falsified: false,
            })
        }
    }
}

fn present(path: &Path, grp_out: Option<&Path>, s: &Settings) -> Result<Outcome, CliError> {
    let mut doc = CertificateDocument::new("present enumerate");
    let (text, hash) = read_file(path)?;
    doc.inputs.push(hash);
    let pres = format::parse_presentation(&text).map_err(|e| input_err(path, e))?;
    let table = todd_coxeter(&pres, s.max_cosets).map_err(failed)?;
    let bad = pres.relators().iter().position(|r| !table.evaluate(r).is_identity());
    doc.checks.push(Check::new(
        "relators_trivial",
        "every relator acts trivially on the cosets",
        bad.is_none(),
        bad.map(|i| format!("relator {}", i + 1)),
    ));
    let g = PermutationGroup::with_seed(table.generators.clone(), s.seed).map_err(failed)?;
    let regular = g.transitivity_flags().regular;
    doc.checks.push(Check::new("regular", "the coset action is regular", regular, None));
    doc.data = json!({ "cosets": table.coset_count(), "generators": pres.generator_count() });
    if let Some(out) = grp_out {
        write_file(out, &format::write_group(table.coset_count(), &table.generators))?;
    }
    Ok(certificate(doc))
}

fn parse_h(text: &str, seq: &ConcentricSequence, path: &Path) -> Result<Permutation, CliError> {
    if text.trim() == "e" {
        return Ok(Permutation::identity(seq.degree()));
    }
    format::parse_generator(text, seq.degree()).map_err(|e| input_err(path, format!("--h: {e}")))
}

fn mn(args: &MnArgs, s: &Settings, verify: bool) -> Result<Outcome, CliError> {
    let mut doc = CertificateDocument::new(if verify { "verify mn" } else { "construct mn" });
    doc.interpretation_notes.push(A_M_NOTE.to_string());
    let (text, hash) = read_file(&args.ccs)?;
    doc.inputs.push(hash);
    let seq = format::parse_concentric(&text).map_err(|e| input_err(&args.ccs, e))?;
    let h = parse_h(&args.h, &seq, &args.ccs)?;
    let inst = match build_mn_instance(&seq, &h, s.seed) {
        Ok(i) => i,
        Err(e @ MnError::NotAPermutation { .. }) => {
            doc.checks.push(Check::new("tau_h_bijective", "tau_h is a permutation of H", false, Some(e.to_string())));
            doc.data = json!({ "h": h.to_string(), "in_c": seq.c_set().contains(&h) });
            return Ok(certificate(doc));
        }
        Err(e) => return Err(input_err(&args.ccs, e)),
    };
    doc.checks.push(Check::new("tau_h_bijective", "tau_h is a permutation of H", true, None));
    doc.checks.extend(inst.checks.iter().cloned());
    let order = inst.group.order();
    let vertices = &order / seq.h_set().len();
    let mut data = json!({
        "h": h.to_string(),
        "tau_h": inst.tau_h.to_string(),
        "group_order": order.to_string(),
        "vertices": vertices.to_string(),
    });
    if verify || args.graph_out.is_some() {
        let cg = materialize_coset_graph(&inst.group, &inst.regular_set, &inst.tau_h, s.max_vertices).map_err(failed)?;
        if let Some(out) = &args.graph_out {
            write_file(out, &format::write_graph(&cg.graph))?;
        }
        if verify {
            let g = &cg.graph;
            let formula = index_of_self_intersection(&inst.regular_set, &inst.tau_h)
                * if double_cosets_equal(&inst.regular_set, &inst.tau_h) { 1 } else { 2 };
            doc.checks.push(Check::new("connected", "the coset graph is connected", g.is_connected(), None));
            doc.checks.push(Check::new(
                "tetravalent",
                "the coset graph has valency 4",
                g.valency() == Some(4),
                Some(format!("valency {:?}", g.valency())),
            ));
            doc.checks.push(Check::new(
                "valency_formula",
                "valency = |H : H ∩ H^g|, doubled when the double cosets differ",
                g.valency() == Some(formula),
                Some(format!("formula gives {formula}")),
            ));
            let action = cg.action_group();
            let r = transitivity_report(g, Some(&action), s.max_vertices).map_err(failed)?;
            doc.checks.extend(report_checks(&r, g));
            doc.checks.push(Check::new(
                "stabilizer_order",
                "the vertex stabilizer has order |H|",
                r.stabilizer.order() == seq.h_set().len().into(),
                Some(format!("|G_v| = {}", r.stabilizer.order())),
            ));
            data["hat"] = json!(r.hat);
        }
    }
    doc.data = data;
    Ok(certificate(doc))
}

fn wreath(path: &Path, s: &Settings, verify: bool) -> Result<Outcome, CliError> {
    let mut doc = CertificateDocument::new(if verify { "verify wreath" } else { "construct wreath" });
    let (text, hash) = read_file(path)?;
    doc.inputs.push(hash);
    let f = format::parse_wreath(&text).map_err(|e| input_err(path, e))?;
    let w_path = path.parent().unwrap_or(Path::new(".")).join(&f.w);
    let w = load_group(&w_path, s, &mut doc)?;
    let (a, h) = f.generators(w.degree()).map_err(|e| input_err(path, e))?;
    let werr = |e: WreathError| input_err(path, e);
    let report = check_c1_c4(&w, &a, &h).map_err(werr)?;
    doc.checks.extend(report.checks.iter().cloned());
    let inst = build_wreath_instance(&w, &a, &h, f.m).map_err(werr)?;
    if verify {
        doc.checks.extend(verify_wreath_theorem(&inst).map_err(werr)?);
    }
    doc.data = json!({
        "m": f.m,
        "degree": inst.degree(),
        "group_order": inst.group.order().to_string(),
        "vertices": vertex_count(&inst),
        "a_tau": inst.a_tau.to_string(),
    });
    Ok(certificate(doc))
}

/// Checks attached to every transitivity report.
fn report_checks(r: &hat_core::graph::TransitivityReport, g: &Graph) -> Vec<Check> {
    let mut checks = vec![Check::new(
        "hat",
        "vertex- and edge-transitive but not arc-transitive",
        r.hat,
        Some(format!(
            "vertex {}, edge {}, arc {}",
            r.vertex_transitive, r.edge_transitive, r.arc_transitive
        )),
    )];
    if r.hat {
        let edges = g.edge_count();
        checks.push(Check::new(
            "arc_orbits",
            "two arc orbits, each of size |E|",
            r.arc_orbit_sizes.iter().all(|&k| k == edges) && r.arc_orbit_sizes.len() == 2,
            Some(format!("{:?}", r.arc_orbit_sizes)),
        ));
    }
    if r.concentric_searched {
        checks.push(Check::new(
            "stabilizer_concentric",
            "the vertex stabilizer is a concentric group",
            r.stabilizer_concentric.is_some(),
            None,
        ));
    }
    checks
}

fn graph(cmd: &GraphCmd, s: &Settings) -> Result<Outcome, CliError> {
    match cmd {
        GraphCmd::Aut { graph } => {
            let mut doc = CertificateDocument::new("graph aut");
            let g = load_graph(graph, &mut doc)?;
            let aut = graph_automorphism_group(&g, s.max_vertices).map_err(failed)?;
            let bad = aut.generators().iter().position(|p| !g.preserves(p));
            doc.checks.push(Check::new(
                "generators_preserve_adjacency",
                "every generator is an automorphism",
                bad.is_none(),
                bad.map(|i| format!("generator {}", i + 1)),
            ));
            let gens: Vec<String> = aut.generators().iter().map(|p| p.to_string()).collect();
            doc.data = json!({ "order": aut.order().to_string(), "generators": gens });
            Ok(certificate(doc))
        }
        GraphCmd::Report { graph, grp } => {
            let mut doc = CertificateDocument::new("graph report");
            let g = load_graph(graph, &mut doc)?;
            let group = grp.as_deref().map(|p| load_group(p, s, &mut doc)).transpose()?;
            let r = transitivity_report(&g, group.as_ref(), s.max_vertices).map_err(failed)?;
            doc.checks.push(Check::new(
                "hat_definition",
                "hat holds exactly when vertex- and edge- but not arc-transitive",
                r.hat == (r.vertex_transitive && r.edge_transitive && !r.arc_transitive),
                None,
            ));
            if r.hat {
                doc.checks.extend(report_checks(&r, &g).into_iter().skip(1));
                if g.valency() == Some(4) && g.is_connected() {
                    let acting = match &group {
                        Some(x) => x.clone(),
                        None => graph_automorphism_group(&g, s.max_vertices).map_err(failed)?,
                    };
                    if acting.is_solvable() {
                        let ea = r.stabilizer_is_elementary_abelian().map_err(failed)?;
                        doc.checks.push(Check::new(
                            "solvable_stabilizer",
                            "a solvable G gives an elementary abelian vertex stabilizer",
                            ea,
                            None,
                        ));
                    }
                }
            }
            doc.data = json!({
                "group_used": if r.supplied_group { "supplied" } else { "full automorphism group" },
                "group_order": r.group_order.to_string(),
                "vertex_transitive": r.vertex_transitive,
                "edge_transitive": r.edge_transitive,
                "arc_transitive": r.arc_transitive,
                "hat": r.hat,
                "arc_orbit_sizes": r.arc_orbit_sizes,
                "stabilizer_order": r.stabilizer.order().to_string(),
                "stabilizer_concentric": r.stabilizer_concentric.as_ref().map(|c| c.gens().iter().map(|p| p.to_string()).collect::<Vec<_>>()),
            });
            Ok(certificate(doc))
        }
        GraphCmd::Quotient { graph, grp, normal, graph_out } => {
            let mut doc = CertificateDocument::new("graph quotient");
            let g = load_graph(graph, &mut doc)?;
            let group = load_group(grp, s, &mut doc)?;
            let n = load_group(normal, s, &mut doc)?;
            let q = normal_quotient(&g, &group, &n).map_err(failed)?;
            doc.checks.extend(quotient_checks(&q, &g));
            if let Some(out) = graph_out {
                write_file(out, &format::write_graph(&q.quotient))?;
            }
            doc.data = json!({
                "orbits": q.orbit_partition.len(),
                "quotient_valency": q.quotient_valency,
                "is_normal_cover": q.is_normal_cover,
                "n_semiregular": q.n_semiregular,
                "degenerate": q.degenerate,
            });
            Ok(certificate(doc))
        }
        GraphCmd::Classify { graph, grp, normal, with_aut } => {
            let mut doc = CertificateDocument::new("graph classify");
            let g = load_graph(graph, &mut doc)?;
            let group = load_group(grp, s, &mut doc)?;
            let source = if normal.is_empty() {
                NormalSource::Computed { cap: s.max_elements }
            } else {
                let list = normal.iter().map(|p| load_group(p, s, &mut doc)).collect::<Result<Vec<_>, _>>()?;
                doc.interpretation_notes.push("classified relative to the supplied normal subgroups".into());
                NormalSource::Supplied(list)
            };
            let aut = if *with_aut {
                Some(graph_automorphism_group(&g, s.max_vertices).map_err(failed)?)
            } else {
                None
            };
            let c = classify_basic(&g, &group, source, aut.as_ref().map(|a| (a, s.max_elements))).map_err(failed)?;
            for q in &c.quotients {
                doc.checks.extend(quotient_checks(q, &g));
            }
            let outcome = match c.outcome {
                BasicType::NotBasic { witness } => json!({ "type": "not_basic", "witness": witness + 1 }),
                BasicType::Quasiprimitive => json!({ "type": "quasiprimitive" }),
                BasicType::BiQuasiprimitive { aut_clause } => {
                    json!({ "type": "bi_quasiprimitive", "aut_clause": aut_clause.map_or("unverified".to_string(), |b| b.to_string()) })
                }
                BasicType::CycleType { witness, length } => {
                    json!({ "type": "cycle_type", "witness": witness + 1, "length": length })
                }
            };
            let orders: Vec<String> = c.tested.iter().map(|n| n.order().to_string()).collect();
            doc.data = json!({ "outcome": outcome, "relative_to_supplied": c.relative_to_supplied, "normal_orders": orders });
            Ok(certificate(doc))
        }
        GraphCmd::Cayley { grp, connection, graph_out } => {
            let mut doc = CertificateDocument::new("graph cayley");
            let group = load_group(grp, s, &mut doc)?;
            let (text, hash) = read_file(connection)?;
            doc.inputs.push(hash);
            let conn = format::parse_group(&text).map_err(|e| input_err(connection, e))?.generators;
            let elements: ElementSet = group.enumerate_elements(s.max_elements).map_err(failed)?;
            let cg = cayley_graph(&elements, &conn).map_err(|e| input_err(connection, e))?;
            if let Some(out) = graph_out {
                write_file(out, &format::write_graph(&cg))?;
            }
            let r = cayley_normality_report(&elements, &conn, s.max_vertices, s.max_elements).map_err(failed)?;
            if let Some(ok) = r.normalizer_matches {
                doc.checks.push(Check::new(
                    "normalizer_order",
                    "the normalizer of R(G) has order |G| |Aut(G,S)|",
                    ok,
                    r.normalizer_order.as_ref().map(|o| format!("|N| = {o}")),
                ));
            }
            if let Some(ok) = r.faithful_on_neighbourhood {
                doc.checks.push(Check::new(
                    "faithful_on_neighbourhood",
                    "the vertex stabilizer in the normalizer is faithful on the neighbourhood",
                    ok,
                    None,
                ));
            }
            doc.data = json!({
                "vertices": cg.vertex_count(),
                "connected": cg.is_connected(),
                "aut_order": r.aut_order.to_string(),
                "aut_gs_order": r.aut_gs_order.to_string(),
                "normal": r.normal,
            });
            Ok(certificate(doc))
        }
    }
}

fn quotient_checks(q: &hat_core::graph::QuotientResult, g: &Graph) -> Vec<Check> {
    let mut checks = vec![Check::new(
        "quotient_valency_bound",
        "the quotient valency is at most the original valency",
        match (q.quotient_valency, g.valency()) {
            (Some(a), Some(b)) => a <= b,
            _ => false,
        },
        Some(format!("{:?} vs {:?}", q.quotient_valency, g.valency())),
    )];
    if q.cover_lemma != CoverLemma::NotApplicable {
        checks.push(Check::new(
            "normal_cover_lemma",
            "for G non-solvable and N solvable, a normal cover with N semiregular",
            q.cover_lemma == CoverLemma::Holds,
            Some(format!("cover {}, semiregular {}", q.is_normal_cover, q.n_semiregular)),
        ));
    }
    checks
}

fn perm_order(path: &Path, s: &Settings) -> Result<Outcome, CliError> {
    let mut doc = CertificateDocument::new("perm order");
    let g = load_group(path, s, &mut doc)?;
    let flags = g.transitivity_flags();
    doc.data = json!({
        "degree": g.degree(),
        "order": g.order().to_string(),
        "transitive": flags.transitive,
        "semiregular": flags.semiregular,
        "regular": flags.regular,
    });
    Ok(certificate(doc))
}
