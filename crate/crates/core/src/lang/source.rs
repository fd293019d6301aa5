use std::fmt;

/// Source text plus a label for diagnostics (a file path or `<stdin>`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceText {
    pub content: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(origin: impl Into<String>, content: impl Into<String>) -> Self {
        SourceText {
            content: content.into(),
            origin: origin.into(),
        }
    }

    pub fn stdin(content: impl Into<String>) -> Self {
        Self::new("<stdin>", content)
    }

    /// 1-based line and column (in characters) of a byte offset.
    pub fn position(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.content.len());
        let before = &self.content[..offset];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = before[line_start..].chars().count() + 1;
        (line, column)
    }
}

/// A region of source text: 1-based line and column, length in characters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl Span {
    pub fn to(self, end: Span) -> Span {
        let length = (end.offset + end.length).saturating_sub(self.offset);
        Span { length, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
}

impl ParseDiagnostic {
    pub fn error(message: impl Into<String>, span: Span) -> Self {
        ParseDiagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `origin:line:column: error: message`
    pub fn render(&self, src: &SourceText) -> String {
        format!("{}:{self}", src.origin)
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {sev}: {}",
            self.span.line, self.span.column, self.message
        )
    }
}
