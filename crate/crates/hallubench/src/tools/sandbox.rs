//! Local Python sandbox for the `exec_code` tool.
//!
//! Each invocation runs in a fresh interpreter process inside a temp
//! directory, with the environment cleared, an address-space ceiling, a
//! wall-clock kill, and an audit hook that blocks network access, process
//! spawning, and file access outside the sandbox (reads of the interpreter's
//! own installation are allowed so imports keep working).

use std::io::Read;
use std::process::{Command, Stdio};
use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

use serde_json::Value;

use super::registry::{string_arg, Tool};
use super::spec::{ToolErrorKind, ToolResult, ToolSpec};

/// Guard program executed as `python3 -I _runner.py <mem_bytes> <source_file>`.
/// It applies resource limits and audit-hook policy, then runs the user
/// source in a clean `__main__` namespace.
const RUNNER: &str = r#"
import os
import resource
import sys

mem_bytes = int(sys.argv[1])
source_path = sys.argv[2]
sandbox_root = os.path.realpath(os.getcwd())

resource.setrlimit(resource.RLIMIT_AS, (mem_bytes, mem_bytes))
resource.setrlimit(resource.RLIMIT_FSIZE, (8 * 1024 * 1024, 8 * 1024 * 1024))

with open(source_path) as f:
    source = f.read()

read_roots = [sandbox_root]
for root in [sys.prefix, sys.exec_prefix, sys.base_prefix] + list(sys.path):
    if root:
        read_roots.append(os.path.realpath(root))

def _within(path, roots):
    try:
        real = os.path.realpath(path)
    except (OSError, ValueError):
        return False
    return any(real == r or real.startswith(r + os.sep) for r in roots)

BLOCKED_PREFIXES = ("socket.", "subprocess.", "ctypes.", "ftplib.", "urllib.", "http.")
BLOCKED_EVENTS = {
    "os.system", "os.exec", "os.posix_spawn", "os.spawn", "os.fork", "os.forkpty", "pty.spawn",
}
MUTATING_EVENTS = {"os.remove", "os.rename", "os.rmdir", "os.truncate", "shutil.rmtree", "os.chmod"}

def _hook(event, args):
    if event.startswith(BLOCKED_PREFIXES) or event in BLOCKED_EVENTS:
        raise PermissionError(f"sandbox: '{event}' is not allowed")
    if event == "open":
        path, mode = args[0], args[1]
        if isinstance(path, int) or path is None:
            return
        mode = mode or "r"
        writing = any(c in mode for c in "wax+")
        if writing and not _within(path, [sandbox_root]):
            raise PermissionError(f"sandbox: cannot write outside the sandbox: {path!r}")
        if not writing and not _within(path, read_roots):
            raise PermissionError(f"sandbox: cannot read outside the sandbox: {path!r}")
    elif event in MUTATING_EVENTS:
        if args and not _within(args[0], [sandbox_root]):
            raise PermissionError(f"sandbox: cannot modify files outside the sandbox: {args[0]!r}")

sys.addaudithook(_hook)

code = compile(source, "main.py", "exec")
exec(code, {"__name__": "__main__"})
"#;

/// Counting semaphore bounding concurrent interpreter processes.
struct SandboxPool {
    free: Mutex<u32>,
    cv: Condvar,
}

impl SandboxPool {
    fn new(slots: u32) -> Self {
        SandboxPool { free: Mutex::new(slots.max(1)), cv: Condvar::new() }
    }

    fn acquire(self: &Arc<Self>) -> PoolSlot {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        PoolSlot { pool: Arc::clone(self) }
    }
}

struct PoolSlot {
    pool: Arc<SandboxPool>,
}

impl Drop for PoolSlot {
    fn drop(&mut self) {
        *self.pool.free.lock().unwrap() += 1;
        self.pool.cv.notify_one();
    }
}

const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
const DEFAULT_MEMORY_BYTES: u64 = 512 * 1024 * 1024;
const DEFAULT_POOL_SLOTS: u32 = 2;
const OUTPUT_CAP: usize = 8 * 1024;

/// Sandboxed Python executor; implements the `exec_code` tool.
pub struct CodeSandbox {
    python: String,
    timeout: Duration,
    memory_bytes: u64,
    pool: Arc<SandboxPool>,
}

impl Default for CodeSandbox {
    fn default() -> Self {
        CodeSandbox::new("python3", DEFAULT_TIMEOUT, DEFAULT_MEMORY_BYTES, DEFAULT_POOL_SLOTS)
    }
}

impl CodeSandbox {
    pub fn new(python: &str, timeout: Duration, memory_bytes: u64, pool_slots: u32) -> Self {
        CodeSandbox {
            python: python.to_string(),
            timeout,
            memory_bytes,
            pool: Arc::new(SandboxPool::new(pool_slots)),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    /// Run one Python program to completion (or the wall-clock limit).
    pub fn run(&self, source: &str) -> ToolResult {
        let _slot = self.pool.acquire();

        let dir = match tempfile::tempdir() {
            Ok(dir) => dir,
            Err(e) => {
                return ToolResult::failure(
                    ToolErrorKind::ExecutionError,
                    format!("could not create sandbox dir: {e}"),
                )
            }
        };
        let runner_path = dir.path().join("_runner.py");
        let source_path = dir.path().join("main.py");
        if let Err(e) = std::fs::write(&runner_path, RUNNER)
            .and_then(|()| std::fs::write(&source_path, source))
        {
            return ToolResult::failure(
                ToolErrorKind::ExecutionError,
                format!("could not stage sandbox files: {e}"),
            );
        }

        let spawned = Command::new(&self.python)
            .arg("-I")
            .arg(&runner_path)
            .arg(self.memory_bytes.to_string())
            .arg(&source_path)
            .current_dir(dir.path())
            .env_clear()
            .env("PATH", "/usr/local/bin:/usr/bin:/bin")
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn();
        let mut child = match spawned {
            Ok(child) => child,
            Err(e) => {
                return ToolResult::failure(
                    ToolErrorKind::ExecutionError,
                    format!("could not start interpreter '{}': {e}", self.python),
                )
            }
        };

        // Drain pipes from threads so a chatty child can never block on a
        // full pipe while we wait for it.
        let mut stdout_pipe = child.stdout.take().expect("piped");
        let mut stderr_pipe = child.stderr.take().expect("piped");
        let stdout_reader = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = stdout_pipe.read_to_string(&mut buf);
            buf
        });
        let stderr_reader = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = stderr_pipe.read_to_string(&mut buf);
            buf
        });

        let started = Instant::now();
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break Some(status),
                Ok(None) => {
                    if started.elapsed() > self.timeout {
                        let _ = child.kill();
                        let _ = child.wait();
                        break None;
                    }
                    std::thread::sleep(Duration::from_millis(10));
                }
                Err(e) => {
                    let _ = child.kill();
                    let _ = child.wait();
                    return ToolResult::failure(
                        ToolErrorKind::ExecutionError,
                        format!("wait failed: {e}"),
                    );
                }
            }
        };

        let stdout = stdout_reader.join().unwrap_or_default();
        let stderr = stderr_reader.join().unwrap_or_default();

        match status {
            None => ToolResult::failure(
                ToolErrorKind::Timeout,
                format!("execution exceeded the {}s wall-clock limit", self.timeout.as_secs_f64()),
            ),
            Some(status) if status.success() => ToolResult::success(cap(&stdout)),
            Some(_) => {
                let detail = if stderr.trim().is_empty() { &stdout } else { &stderr };
                ToolResult::failure(ToolErrorKind::ExecutionError, cap(detail.trim_end()))
            }
        }
    }
}

fn cap(text: &str) -> String {
    if text.len() <= OUTPUT_CAP {
        return text.to_string();
    }
    let mut end = OUTPUT_CAP;
    while !text.is_char_boundary(end) {
        end -= 1;
    }
    format!("{}…[truncated]", &text[..end])
}

impl Tool for CodeSandbox {
    fn spec(&self) -> ToolSpec {
        ToolSpec::single_string_param(
            "exec_code",
            "Executes arbitrary Python code in a secure sandbox environment and returns what it \
             prints. The sandbox has no network access, cannot spawn processes, and cannot touch \
             files outside its working directory. Useful for calculations and data manipulation.",
            "source",
            "the Python source code to execute",
        )
    }

    fn invoke(&self, arguments: &Value) -> ToolResult {
        match string_arg(arguments, "source") {
            Ok(source) => self.run(&source),
            Err(result) => result,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sandbox() -> CodeSandbox {
        CodeSandbox::default()
    }

    #[test]
    fn prints_arithmetic() {
        let result = sandbox().run("print(1+1)");
        assert!(result.ok, "{}", result.content);
        assert_eq!(result.content.trim(), "2");
    }

    #[test]
    fn missing_module_error_is_an_observation() {
        let result = sandbox().run("import wikipedia\nprint(wikipedia.summary('kelp'))");
        assert!(!result.ok);
        assert_eq!(result.error_kind, Some(ToolErrorKind::ExecutionError));
        assert!(
            result.content.contains("No module named 'wikipedia'"),
            "unexpected error text: {}",
            result.content
        );
    }

    #[test]
    fn nonterminating_code_is_killed() {
        let result = sandbox().with_timeout(Duration::from_millis(400)).run("while True: pass");
        assert!(!result.ok);
        assert_eq!(result.error_kind, Some(ToolErrorKind::Timeout));
    }

    #[test]
    fn cannot_read_files_outside_the_sandbox() {
        let canary = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(canary.path(), "secret").unwrap();
        let source = format!("print(open({:?}).read())", canary.path().to_str().unwrap());
        let result = sandbox().run(&source);
        assert!(!result.ok, "canary read must fail, got: {}", result.content);
        assert!(result.content.contains("sandbox"), "error text: {}", result.content);
        assert!(!result.content.contains("secret"));
    }

    #[test]
    fn cannot_write_outside_or_use_network_or_spawn() {
        let write = sandbox().run("open('/tmp/hallubench-escape.txt','w').write('x')");
        assert!(!write.ok, "{}", write.content);

        let net = sandbox().run("import socket\nsocket.create_connection(('127.0.0.1', 80))");
        assert!(!net.ok);
        assert!(net.content.contains("sandbox") || net.content.contains("not allowed"));

        let spawn = sandbox().run("import subprocess\nsubprocess.run(['ls'])");
        assert!(!spawn.ok, "{}", spawn.content);
    }

    #[test]
    fn writes_inside_sandbox_are_allowed() {
        let result = sandbox().run(
            "with open('scratch.txt','w') as f:\n    f.write('ok')\nprint(open('scratch.txt').read())",
        );
        assert!(result.ok, "{}", result.content);
        assert_eq!(result.content.trim(), "ok");
    }

    #[test]
    fn exceptions_and_empty_source_are_reported() {
        let boom = sandbox().run("raise ValueError('boom')");
        assert!(!boom.ok);
        assert!(boom.content.contains("boom"));

        let empty = sandbox().invoke(&serde_json::json!({"source": "  "}));
        assert_eq!(empty.error_kind, Some(ToolErrorKind::BadArguments));
    }

    #[test]
    fn pool_serializes_concurrent_runs() {
        let sandbox = Arc::new(CodeSandbox::new("python3", Duration::from_secs(10), DEFAULT_MEMORY_BYTES, 2));
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let sandbox = Arc::clone(&sandbox);
                std::thread::spawn(move || sandbox.run(&format!("print({i}*{i})")))
            })
            .collect();
        for (i, handle) in handles.into_iter().enumerate() {
            let result = handle.join().unwrap();
            assert!(result.ok);
            assert_eq!(result.content.trim(), format!("{}", i * i));
        }
    }
}
