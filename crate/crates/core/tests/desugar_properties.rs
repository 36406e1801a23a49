mod common;

use common::criteria::{compositionality, random_program, totality};
use lambdajs::desugar::desugar;
use lambdajs::eval::eval;
use lambdajs::syntax::Configuration;
use lambdajs::js;
use rand::Rng;

#[test]
fn desugaring_is_total_and_closed() {
    totality(1500, 21).unwrap();
}

#[test]
fn generated_programs_exercise_the_grammar() {
    let text: String = (0..300).map(|i| random_program(21 + i)).collect();
    for kw in ["switch", "with", "for (", " in ", "try", "finally", "continue", "break L", "new ", "typeof", "++"] {
        assert!(text.contains(kw), "{kw}");
    }
}

#[test]
fn placeholder_children_are_translated_once() {
    compositionality().unwrap();
}

fn printed(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let term = desugar(&js::parse(src).unwrap());
    let r = eval(Configuration::new(term), Some(5_000_000), &mut out);
    assert!(r.outcome.is_value(), "{src}: {:?}", r.outcome);
    out
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// A random chain of `with` blocks over three objects, and the output
/// predicted by resolving each name innermost-first.
fn with_case(seed: u64) -> (String, Vec<String>) {
    let mut rng = common::rng(seed);
    // objects[i][j]: value of field NAMES[j] on object i, if present.
    let objects: Vec<Vec<Option<i32>>> = (0..3)
        .map(|i| (0..3).map(|j| rng.gen_bool(0.5).then_some(10 * (i + 1) + j)).chain([None]).collect())
        .collect();
    let mut globals: Vec<Option<i32>> = vec![Some(1), Some(2), Some(3), Some(4)];
    let chain: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..3)).collect();
    let target = rng.gen_range(0..4);

    let mut src = String::from("var a = 1, b = 2, c = 3, d = 4;\n");
    for (i, fields) in objects.iter().enumerate() {
        let body: Vec<String> =
            fields.iter().enumerate().filter_map(|(j, v)| v.map(|v| format!("{}: {v}", NAMES[j]))).collect();
        src.push_str(&format!("var o{i} = {{{}}};\n", body.join(", ")));
    }
    for &o in &chain {
        src.push_str(&format!("with (o{o}) {{\n"));
    }
    for n in NAMES {
        src.push_str(&format!("print({n});\n"));
    }
    src.push_str(&format!("{} = 99;\n", NAMES[target]));
    src.push_str(&"}".repeat(chain.len()));
    src.push('\n');
    for (i, _) in objects.iter().enumerate() {
        for n in NAMES {
            src.push_str(&format!("print(o{i}.{n});\n"));
        }
    }
    for n in NAMES {
        src.push_str(&format!("print({n});\n"));
    }

    let show = |v: Option<i32>| v.map_or("undefined".to_string(), |v| v.to_string());
    let holder = |objects: &Vec<Vec<Option<i32>>>, j: usize| chain.iter().rev().copied().find(|&o| objects[o][j].is_some());
    let mut expected = Vec::new();
    for j in 0..4 {
        expected.push(show(match holder(&objects, j) {
            Some(o) => objects[o][j],
            None => globals[j],
        }));
    }
    let mut objects = objects;
    match holder(&objects, target) {
        Some(o) => objects[o][target] = Some(99),
        None => globals[target] = Some(99),
    }
    for fields in &objects {
        expected.extend(fields.iter().map(|v| show(*v)));
    }
    expected.extend(globals.iter().map(|v| show(*v)));
    (src, expected)
}

#[test]
fn with_resolves_names_innermost_first() {
    for seed in 0..20 {
        let (src, expected) = with_case(seed);
        assert_eq!(printed(&src), expected, "{src}");
    }
}
