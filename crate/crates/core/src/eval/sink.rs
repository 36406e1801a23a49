//! Destinations for the output primitive.

use std::io::Write;

pub trait Sink {
    fn print(&mut self, line: &str);
}

impl Sink for Vec<String> {
    fn print(&mut self, line: &str) {
        self.push(line.to_string());
    }
}

/// Accumulates newline-terminated lines.
impl Sink for String {
    fn print(&mut self, line: &str) {
        self.push_str(line);
        self.push('\n');
    }
}

/// Drops all output.
pub struct Discard;

impl Sink for Discard {
    fn print(&mut self, _line: &str) {}
}

pub struct Stdout;

impl Sink for Stdout {
    fn print(&mut self, line: &str) {
        let mut out = std::io::stdout().lock();
        // A closed pipe is not worth aborting evaluation for.
        let _ = writeln!(out, "{line}");
    }
}
