use std::fmt::Display;

/// Ordered `key: value` lines plus an exit code.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
    inconclusive: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kv(mut self, key: &str, value: impl Display) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    /// Exit with code 1 instead of 0.
    pub fn inconclusive(mut self, yes: bool) -> Self {
        self.inconclusive |= yes;
        self
    }

    pub fn exit_code(&self) -> u8 {
        u8::from(self.inconclusive)
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| if k.is_empty() { format!("{v}\n") } else { format!("{k}: {v}\n") }).collect()
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Malformed input, exit code 2.
    Input(String),
    /// The computation could not decide, exit code 1.
    Inconclusive(String),
}

pub trait InputContext<T> {
    fn input(self, what: &str) -> Result<T, Failure>;
}

impl<T, E: Display> InputContext<T> for Result<T, E> {
    fn input(self, what: &str) -> Result<T, Failure> {
        self.map_err(|e| Failure::Input(format!("{what}: {e}")))
    }
}

pub trait Undecided<T> {
    fn undecided(self) -> Result<T, Failure>;
}

impl<T, E: Display> Undecided<T> for Result<T, E> {
    fn undecided(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Inconclusive(e.to_string()))
    }
}
