//! Line-oriented terminal wizard over an engine session.

use std::io::{self, BufRead, Write};
use std::sync::Arc;

use vizadvisor_core::engine::{EngineError, Prompt, Recommendation, Session};
use vizadvisor_core::tree::DecisionTree;

use crate::render;

/// How a wizard run ended.
#[derive(Debug)]
pub enum Outcome {
    Finished(Recommendation),
    /// The user typed `q`.
    Quit,
    /// Input ran out before a recommendation.
    EndOfInput,
}

fn show_question(out: &mut impl Write, prompt: &Prompt, can_go_back: bool) -> io::Result<()> {
    let Prompt::Question {
        text,
        options,
        allows_dont_know,
        ..
    } = prompt
    else {
        return Ok(());
    };
    writeln!(out, "\n{text}")?;
    for (i, option) in options.iter().enumerate() {
        writeln!(out, "  {}) {}", i + 1, option.label)?;
    }
    if *allows_dont_know {
        writeln!(out, "  ?) I don't know")?;
    }
    if can_go_back {
        writeln!(out, "  b) Back")?;
    }
    write!(out, "> ")?;
    out.flush()
}

/// Runs the wizard reading commands from `input`: an option number, `b`
/// (back), `?` (don't know) or `q` (quit).
pub fn run(tree: Arc<DecisionTree>, input: impl BufRead, out: &mut impl Write) -> io::Result<Outcome> {
    let mut session = Session::start(tree);
    let mut lines = input.lines();
    loop {
        let prompt = session.prompt();
        if let Prompt::Finished { recommendation } = prompt {
            writeln!(out, "\n{}", render::recommendation(&recommendation))?;
            return Ok(Outcome::Finished(recommendation));
        }
        show_question(out, &prompt, !session.history().is_empty())?;
        let Some(line) = lines.next() else {
            writeln!(out)?;
            return Ok(Outcome::EndOfInput);
        };
        let line = line?;
        let command = line.trim();
        let result = match command {
            "q" | "quit" => return Ok(Outcome::Quit),
            "b" | "back" => session.go_back(),
            "?" => session.dont_know(),
            _ => match (command.parse::<usize>(), &prompt) {
                (Ok(n), Prompt::Question { options, .. }) if (1..=options.len()).contains(&n) => {
                    session.answer(&options[n - 1].value)
                }
                _ => {
                    writeln!(out, "Please enter an option number, 'b', '?' or 'q'.")?;
                    continue;
                }
            },
        };
        match result {
            Ok(_) => {}
            Err(EngineError::AtRoot) => writeln!(out, "Already at the first question.")?,
            Err(EngineError::DontKnowNotAllowed(_)) => writeln!(out, "This question needs an answer.")?,
            Err(e) => writeln!(out, "{e}")?,
        }
    }
}
