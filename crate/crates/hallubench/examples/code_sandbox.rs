//! The Python sandbox tool on its own: a successful run, a failing import
//! whose error becomes the observation, and a wall-clock timeout.
//!
//!     cargo run --example code_sandbox

use std::time::Duration;

use hallubench::tools::CodeSandbox;

fn main() {
    let sandbox = CodeSandbox::default();

    let result = sandbox.run("print(sum(range(10)))");
    println!("sum(range(10)) -> ok={} content={:?}", result.ok, result.content);

    let result = sandbox.run("import wikipedia\nprint(wikipedia.summary('kelp'))");
    println!(
        "import wikipedia -> ok={} kind={:?}\n  {}",
        result.ok,
        result.error_kind,
        result.content.lines().last().unwrap_or("")
    );

    let impatient = CodeSandbox::default().with_timeout(Duration::from_millis(300));
    let result = impatient.run("while True:\n    pass");
    println!("busy loop -> ok={} kind={:?} content={:?}", result.ok, result.error_kind, result.content);
}
