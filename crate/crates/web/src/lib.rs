//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Every export takes and returns strings (JSON where structured), so the page
//! needs no glue beyond what wasm-bindgen generates.

use atlas_core::ags::{is_correct, synthesize, Abstraction, Mode};
use atlas_core::bundle::{AbstractionBundle, ExamplePair, TaskFile};
use atlas_core::dsl::parse;
use atlas_core::interp::{check_interpolant, construct_tree, ItpError};
use serde::{Deserialize, Serialize};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Keeps a single request from freezing the tab.
pub const CANDIDATE_BUDGET: u64 = 3_000_000;

#[derive(Deserialize)]
struct Request {
    examples: Vec<ExamplePair>,
    #[serde(default)]
    literals: Vec<String>,
}

#[derive(Serialize)]
struct SynthReply {
    program: Option<String>,
    solved: bool,
    reason: Option<String>,
    enumerated: u64,
    pruned: u64,
    templates: Vec<String>,
}

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

fn task(request: &str) -> Result<TaskFile, String> {
    let r: Request = serde_json::from_str(request).map_err(|e| e.to_string())?;
    if r.examples.is_empty() {
        return Err("add at least one example".into());
    }
    Ok(TaskFile { name: "demo".into(), examples: r.examples, literals: r.literals })
}

/// `request` is `{"examples": [{"input", "output"}…], "literals": […]}`; an empty
/// `bundle` searches with {⊤}.
#[wasm_bindgen]
pub fn synthesize_json(request: &str, bundle: &str, max_size: u32) -> String {
    let file = match task(request) {
        Ok(f) => f,
        Err(e) => return error(e),
    };
    let abs = if bundle.trim().is_empty() {
        Abstraction::top()
    } else {
        match AbstractionBundle::from_json(bundle).and_then(|b| b.abstraction()) {
            Ok(a) => a,
            Err(e) => return error(e),
        }
    };
    let mut t = file.to_task();
    t.bounds.max_size = max_size as usize;
    t.bounds.max_candidates = Some(CANDIDATE_BUDGET);
    let o = synthesize(&t, &abs, Mode::Checked);
    let solved = o.program.as_ref().is_some_and(|p| is_correct(p, &t.examples));
    serde_json::to_string(&SynthReply {
        program: o.program.as_ref().map(|p| p.to_string()),
        solved,
        reason: o.reason,
        enumerated: o.stats.enumerated,
        pruned: o.stats.pruned_abstract,
        templates: abs.templates.iter().map(|t| t.to_string()).collect(),
    })
    .expect("reply serializes")
}

/// Run a program (s-expression) on one input.
#[wasm_bindgen]
pub fn evaluate(program: &str, input: &str) -> String {
    let p = match parse(program) {
        Ok(p) => p,
        Err(e) => return error(e),
    };
    match p.eval(input) {
        Ok(out) => json!({ "output": out }).to_string(),
        Err(e) => error(e),
    }
}

/// Interpolant dump (one line per node) for each example the program gets wrong.
#[wasm_bindgen]
pub fn dump_itp(request: &str, program: &str) -> String {
    let file = match task(request) {
        Ok(f) => f,
        Err(e) => return format!("error: {e}\n"),
    };
    let p = match parse(program) {
        Ok(p) => p,
        Err(e) => return format!("error: {e}\n"),
    };
    let mut out = String::new();
    for (k, e) in file.examples.iter().enumerate() {
        match construct_tree(&p, &e.input, &e.output) {
            Ok(tree) => match tree.find_itp() {
                Ok(itp) => {
                    out.push_str(&format!("# example {k}\n{}", tree.dump(&itp)));
                    let verdict = check_interpolant(&tree, &itp).map_or_else(|e| e.to_string(), |()| "ok".into());
                    out.push_str(&format!("check: {verdict}\n"));
                }
                Err(err) => out.push_str(&format!("# example {k}: {err}\n")),
            },
            Err(ItpError::NotSpurious) => out.push_str(&format!("# example {k}: satisfied\n")),
            Err(err) => out.push_str(&format!("# example {k}: {err}\n")),
        }
    }
    out
}
