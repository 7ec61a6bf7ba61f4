//! `arborflow dump`: DOT and JSON exports.

use clap::ValueEnum;
use serde::Serialize;

use arborflow::catalysts::{class_reports, enumerate_catalysts, Arrowflow, ClassReport};
use arborflow::route_map::{build_route_map, to_dot};
use arborflow::Tree;

use crate::error::CliError;
use crate::verify::SCHEMA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DumpKind {
    RouteMapDot,
    CatalystsJson,
    ArrowflowClassesJson,
}

#[derive(Serialize)]
struct CatalystRecord {
    sigma: Vec<usize>,
    f: Vec<String>,
    sign: i64,
    arrowflow: String,
}

#[derive(Serialize)]
struct CatalystDump {
    schema: &'static str,
    tree: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    arrowflow: Option<String>,
    count: usize,
    catalysts: Vec<CatalystRecord>,
}

#[derive(Serialize)]
struct ClassDump {
    schema: &'static str,
    tree: String,
    n: usize,
    classes: Vec<ClassReport>,
}

fn require_flow(tree: &Tree, spec: Option<&str>) -> Result<Arrowflow, CliError> {
    let spec = spec.ok_or_else(|| CliError::Usage("route-map-dot needs --arrowflow".into()))?;
    Ok(Arrowflow::parse(tree, spec).map_err(|e| CliError::Format(e.to_string()))?)
}

pub fn dump(kind: DumpKind, tree: &Tree, flow: Option<&str>) -> Result<String, CliError> {
    match kind {
        DumpKind::RouteMapDot => {
            let a = require_flow(tree, flow)?;
            let rm = build_route_map(tree, &a)?;
            Ok(to_dot(rm.network(), rm.t0().root()))
        }
        DumpKind::CatalystsJson => {
            let filter = flow
                .map(|s| Arrowflow::parse(tree, s).map_err(|e| CliError::Format(e.to_string())))
                .transpose()?;
            let catalysts: Vec<CatalystRecord> = enumerate_catalysts(tree)?
                .filter(|k| filter.as_ref().is_none_or(|a| k.induced_arrowflow() == *a))
                .map(|k| CatalystRecord {
                    sigma: k.sigma_one_line().to_vec(),
                    f: k.f_one_line().iter().map(|a| a.to_string()).collect(),
                    sign: k.sign(),
                    arrowflow: k.induced_arrowflow().to_spec(),
                })
                .collect();
            let out = CatalystDump {
                schema: SCHEMA,
                tree: tree.to_string(),
                n: tree.n(),
                arrowflow: filter.map(|a| a.to_spec()),
                count: catalysts.len(),
                catalysts,
            };
            Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
        }
        DumpKind::ArrowflowClassesJson => {
            let out = ClassDump {
                schema: SCHEMA,
                tree: tree.to_string(),
                n: tree.n(),
                classes: class_reports(tree)?,
            };
            Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
        }
    }
}
