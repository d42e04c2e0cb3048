//! Ground an answer in a knowledge graph: extract an entity, pick one of
//! its properties, and re-answer with the retrieved triple as context.

use crate::codec::ParseSpec;
use crate::tools::{KgTriple, KnowledgeGraph};

use super::common::{try_ask, QueryCtx};
use super::dispatch::StrategyError;
use super::outcome::{AbstainReason, StrategyOutcome, StrategyResult};

/// How many property labels the selection prompt offers at most.
const PROPERTY_CAP: usize = 25;

fn unresolvable(ctx: &QueryCtx<'_>, detail: &str) -> StrategyResult {
    ctx.session.note(&format!("knowledge graph unresolvable: {detail}"));
    ctx.finish(StrategyOutcome::abstained(AbstainReason::KgUnresolvable), Vec::new())
}

pub fn run_kgr(
    ctx: &QueryCtx<'_>,
    kg: &dyn KnowledgeGraph,
) -> Result<StrategyResult, StrategyError> {
    let question = ctx.item.question.as_str();

    let initial_prompt = ctx.control_prompt()?;
    let answer = match try_ask(ctx, &ctx.request(initial_prompt, 0), &ctx.answer_spec())? {
        Some(ask) => ask.answer,
        None => return Ok(ctx.finish(StrategyOutcome::Invalid, Vec::new())),
    };

    let entity_prompt = ctx.render(
        "kgr_entity",
        &[("question", question), ("answer", answer.canonical())],
    )?;
    let spec = ParseSpec::freetext().with_tolerance(ctx.cfg.tolerance);
    let entity_name = match try_ask(ctx, &ctx.request(entity_prompt, 1), &spec)? {
        Some(ask) => ask.answer.canonical().to_string(),
        None => return Ok(ctx.finish(StrategyOutcome::Invalid, Vec::new())),
    };

    let candidates = match kg.search_entity(&entity_name) {
        Ok(candidates) => candidates,
        Err(e) => return Ok(unresolvable(ctx, &format!("entity search failed: {e}"))),
    };
    let Some(entity) = candidates.first() else {
        return Ok(unresolvable(ctx, &format!("no entities found for {entity_name:?}")));
    };

    let mut properties = match kg.list_properties(&entity.entity_id) {
        Ok(properties) => properties,
        Err(e) => return Ok(unresolvable(ctx, &format!("property listing failed: {e}"))),
    };
    properties.sort_by(|a, b| a.label.to_lowercase().cmp(&b.label.to_lowercase()));
    properties.truncate(PROPERTY_CAP);
    if properties.is_empty() {
        return Ok(unresolvable(ctx, &format!("entity {} has no properties", entity.entity_id)));
    }

    let labels: Vec<String> = properties.iter().map(|p| p.label.clone()).collect();
    let property_prompt = ctx.render(
        "kgr_property",
        &[
            ("question", question),
            ("answer", answer.canonical()),
            ("entity", &entity.label),
            ("properties", &labels.join(", ")),
        ],
    )?;
    let chosen_label = if labels.len() >= 2 {
        let spec = ParseSpec::choice(labels.clone()).with_tolerance(ctx.cfg.tolerance);
        match try_ask(ctx, &ctx.request(property_prompt, 2), &spec)? {
            Some(ask) => ask.answer.canonical().to_string(),
            None => return Ok(ctx.finish(StrategyOutcome::Invalid, Vec::new())),
        }
    } else {
        // A single property cannot form a choice spec; take the reply as
        // free text and insist it names that property.
        let reply = match try_ask(ctx, &ctx.request(property_prompt, 2), &spec)? {
            Some(ask) => ask.answer.canonical().to_string(),
            None => return Ok(ctx.finish(StrategyOutcome::Invalid, Vec::new())),
        };
        if !reply.eq_ignore_ascii_case(&labels[0]) {
            return Ok(unresolvable(
                ctx,
                &format!("selected property {reply:?} is not in the offered list"),
            ));
        }
        labels[0].clone()
    };
    let property = properties
        .iter()
        .find(|p| p.label.eq_ignore_ascii_case(&chosen_label))
        .expect("chosen label comes from the offered list");

    let triple = match kg.get_property(&entity.entity_id, &property.property_id) {
        Ok(triple) => triple,
        Err(e) => return Ok(unresolvable(ctx, &format!("property fetch failed: {e}"))),
    };

    let final_prompt =
        ctx.render("kgr_final", &[("question", question), ("triple", &render_triple(&triple))])?;
    let outcome = match try_ask(ctx, &ctx.request(final_prompt, 3), &ctx.answer_spec())? {
        Some(ask) => StrategyOutcome::answered(ask.answer),
        None => StrategyOutcome::Invalid,
    };
    Ok(ctx.finish(outcome, Vec::new()))
}

fn render_triple(triple: &KgTriple) -> String {
    format!("{} — {}: {}", triple.subject_label, triple.property_label, triple.value_text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{Benchmark, BenchmarkItem};
    use crate::strategy::testutil::{ctx_gateway, scripted_rules};
    use crate::tools::{FixtureKg, KgClientError};

    fn douglas_item() -> BenchmarkItem {
        BenchmarkItem::trivia(
            "t2",
            "Which English writer created The Hitchhiker's Guide to the Galaxy?",
            &["Douglas Adams"],
        )
    }

    fn rules<'a>() -> Vec<(&'a str, Vec<&'a str>)> {
        vec![
            ("searching up an entity", vec!["FINAL ANSWER: Douglas Adams"]),
            ("Select which one of the following properties", vec!["FINAL ANSWER: notable work"]),
            ("verified knowledge base: Douglas Adams", vec!["FINAL ANSWER: Douglas Adams"]),
            ("trivia question", vec!["FINAL ANSWER: Douglas Adams"]),
        ]
    }

    fn run(gateway: &crate::gateway::Gateway, kg: &dyn KnowledgeGraph) -> StrategyResult {
        let (store, _, cfg) = ctx_gateway(Benchmark::Triviaqa, "kgr");
        let item = douglas_item();
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        run_kgr(&ctx, kg).unwrap()
    }

    #[test]
    fn clean_run_is_four_prompts_with_triple_context() {
        let gateway = scripted_rules(&rules(), "unused");
        let kg = FixtureKg::with_defaults();
        let result = run(&gateway, &kg);
        assert_eq!(result.prompt_count, 4);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "Douglas Adams");
        let lines = gateway.transcript().lines();
        let final_prompt =
            lines[3]["request"]["messages"][0]["content"].as_str().unwrap().to_string();
        assert!(final_prompt.contains("Douglas Adams — notable work:"));
        assert!(final_prompt.contains("Hitchhiker"));
    }

    #[test]
    fn property_prompt_offers_alphabetical_labels() {
        let gateway = scripted_rules(&rules(), "unused");
        let kg = FixtureKg::with_defaults();
        run(&gateway, &kg);
        let lines = gateway.transcript().lines();
        let prompt = lines[2]["request"]["messages"][0]["content"].as_str().unwrap();
        assert!(prompt.contains("educated at, notable work, occupation"));
    }

    #[test]
    fn unknown_entity_abstains() {
        let gateway = scripted_rules(
            &[
                ("searching up an entity", vec!["FINAL ANSWER: Zorp the Unknown"]),
                ("", vec!["FINAL ANSWER: something"]),
            ],
            "unused",
        );
        let kg = FixtureKg::with_defaults();
        let result = run(&gateway, &kg);
        assert_eq!(
            result.outcome,
            StrategyOutcome::Abstained { reason: AbstainReason::KgUnresolvable }
        );
        assert_eq!(result.prompt_count, 2);
        let notes: Vec<String> = gateway
            .transcript()
            .lines()
            .iter()
            .filter_map(|l| l["note"].as_str().map(String::from))
            .collect();
        assert!(notes.iter().any(|n| n.contains("no entities")));
    }

    #[test]
    fn kg_fault_abstains_with_note() {
        let gateway = scripted_rules(&rules(), "unused");
        let kg = FixtureKg::with_defaults();
        kg.set_fault(Some(KgClientError::Timeout));
        let result = run(&gateway, &kg);
        assert_eq!(
            result.outcome,
            StrategyOutcome::Abstained { reason: AbstainReason::KgUnresolvable }
        );
    }

    #[test]
    fn off_list_property_selection_retries_to_invalid() {
        let mut rules = rules();
        rules[1].1 = vec!["FINAL ANSWER: favorite color"];
        let gateway = scripted_rules(&rules, "unused");
        let kg = FixtureKg::with_defaults();
        let result = run(&gateway, &kg);
        assert_eq!(result.outcome, StrategyOutcome::Invalid);
        // initial + entity + 4 property attempts.
        assert_eq!(result.prompt_count, 6);
    }
}
