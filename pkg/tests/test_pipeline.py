"""Pipeline strategies, greedy retrieval, and whole-subtask runs."""
from __future__ import annotations

import itertools
import json

import pytest

from syllogic.aristotle import augment_existential_import
from syllogic.fol import parse_latex_formula
from syllogic.gateway import StubGateway, load_template
from syllogic.pipeline import (
    EngineChoice,
    PipelineConfig,
    Prediction,
    Strategy,
    Syllogism,
    classify_validity,
    format_syllogism,
    retrieve_relevant_premises,
    run_subtask,
    split_translated_syllogism,
)
from syllogic.prover import ProverProblem, VerdictStatus, decide_entailment

from .conftest import mood_sample, script_multistep, stub_for_dataset

P = parse_latex_formula


class TestSyllogismRecord:
    def test_requires_premises_and_conclusion(self):
        with pytest.raises(ValueError):
            Syllogism(id="a", premises=(), conclusion="c")
        with pytest.raises(ValueError):
            Syllogism(id="a", premises=("p",), conclusion="  ")

    def test_gold_relevant_range_checked(self):
        with pytest.raises(ValueError):
            Syllogism(id="a", premises=("p",), conclusion="c", gold_relevant=(1,))


class TestClassifyValidity:
    def test_transitivity_sample_valid(self, barbara_sample):
        sample, fol_map = barbara_sample
        stub = StubGateway()
        script_multistep(stub, [*sample.premises, sample.conclusion], fol_map)
        prediction = classify_validity(sample, PipelineConfig(), stub)
        assert prediction.valid is True
        assert prediction.diagnostics["attempts"] == 3
        assert prediction.diagnostics["engine"] == "typespace"

    def test_undistributed_middle_invalid_with_countermodel(self):
        sample, fol_map = mood_sample("und-mid", 3, "AAA",
                                      ("sparrow", "bird", "animal"),
                                      label_valid=False)
        stub = StubGateway()
        script_multistep(stub, [*sample.premises, sample.conclusion], fol_map)
        cfg = PipelineConfig(augment_import=False)
        prediction = classify_validity(sample, cfg, stub)
        assert prediction.valid is False
        assert prediction.diagnostics["countermodel"]

    def test_gateway_required(self, barbara_sample):
        sample, _ = barbara_sample
        with pytest.raises(ValueError):
            classify_validity(sample, PipelineConfig(), None)


def sentences(*texts):
    return [P(t) for t in texts]


class TestRetrieval:
    CFG = PipelineConfig()

    def test_barbara_with_injected_noise(self):
        premises = sentences(
            r"\forall x (mamal(x) \rightarrow animal(x))",
            r"\forall x (stone(x) \rightarrow hard(x))",
            r"\forall x (dog(x) \rightarrow mamal(x))",
            r"\forall x (cloud(x) \rightarrow white(x))",
        )
        conclusion = P(r"\forall x (dog(x) \rightarrow animal(x))")
        assert retrieve_relevant_premises(premises, conclusion, self.CFG) == [0, 2]

    def test_invalid_syllogism_returns_empty(self):
        premises = sentences(r"\forall x (a(x) \rightarrow b(x))")
        conclusion = P(r"\forall x (c(x) \rightarrow a(x))")
        assert retrieve_relevant_premises(premises, conclusion, self.CFG) == []

    def test_duplicate_premise_keeps_later_index(self):
        duplicated = r"\forall x (dog(x) \rightarrow animal(x))"
        premises = sentences(duplicated, duplicated)
        conclusion = P(r"\forall x (dog(x) \rightarrow animal(x))")
        assert retrieve_relevant_premises(premises, conclusion, self.CFG) == [1]

    def test_minimality_by_exhaustive_subsets(self):
        premises = sentences(
            r"\forall x (a(x) \rightarrow b(x))",
            r"\forall x (b(x) \rightarrow c(x))",
            r"\forall x (p(x) \rightarrow q(x))",
            r"\exists x (a(x) \land p(x))",
        )
        conclusion = P(r"\exists x (c(x))")
        kept = retrieve_relevant_premises(premises, conclusion, self.CFG)

        def entails(indices):
            subset = [premises[i] for i in indices]
            problem = ProverProblem(
                tuple(augment_existential_import(subset)), conclusion)
            return decide_entailment(problem).status is VerdictStatus.ENTAILED

        assert entails(kept)
        for index in kept:
            assert not entails([i for i in kept if i != index])
        # no strictly smaller entailing subset exists at all
        for size in range(len(kept)):
            for combo in itertools.combinations(range(len(premises)), size):
                assert not entails(list(combo))


class TestTranslationSplitting:
    def test_labeled_lines(self):
        premises, conclusion = split_translated_syllogism(
            "P1: first premise.\nP2: second premise.\nC: the conclusion.", 2)
        assert premises == ["first premise.", "second premise."]
        assert conclusion == "the conclusion."

    def test_bare_lines(self):
        premises, conclusion = split_translated_syllogism("a.\nb.\nc.", 2)
        assert premises == ["a.", "b."]
        assert conclusion == "c."

    def test_count_mismatch(self):
        from syllogic.pipeline import TranslationFormatError

        with pytest.raises(TranslationFormatError):
            split_translated_syllogism("only one line", 2)


def build_mixed_dataset():
    """Eight valid and eight invalid samples across the four label groups."""
    valid_moods = [(1, "AAA"), (1, "EAE"), (2, "AEE"), (2, "EIO"),
                   (3, "IAI"), (3, "OAO"), (4, "AEE"), (1, "AII")]
    invalid_moods = [(1, "AAE"), (2, "AAA"), (3, "AAA"), (4, "III"),
                     (1, "OOO"), (2, "IEO"), (3, "EEE"), (4, "AAO")]
    dataset = []
    fol_maps = {}
    counter = 0
    for validity, moods in ((True, valid_moods), (False, invalid_moods)):
        for figure, mood in moods:
            plausible = counter % 2 == 0
            terms = (f"kind{counter}a", f"kind{counter}b", f"kind{counter}c")
            sample, fol_map = mood_sample(f"s{counter}", figure, mood, terms,
                                          label_valid=validity,
                                          label_plausible=plausible)
            dataset.append(sample)
            fol_maps[sample.id] = fol_map
            counter += 1
    return dataset, fol_maps


class TestRunSubtask:
    def test_subtask1_gold_stub_all_correct(self):
        dataset, fol_maps = build_mixed_dataset()
        stub = stub_for_dataset(dataset, fol_maps)
        predictions = run_subtask(dataset, 1, PipelineConfig(), stub)
        assert [p.id for p in predictions] == [s.id for s in dataset]
        for prediction, sample in zip(predictions, dataset):
            assert prediction.valid == sample.label_valid, sample.id

    def test_engine_isolation(self):
        dataset, fol_maps = build_mixed_dataset()
        stub = stub_for_dataset(dataset, fol_maps)
        typespace = run_subtask(dataset, 1, PipelineConfig(
            engine=EngineChoice.TYPE_SPACE), stub)
        enumeration = run_subtask(dataset, 1, PipelineConfig(
            engine=EngineChoice.DOMAIN_ENUMERATION), stub)
        assert [p.valid for p in typespace] == [p.valid for p in enumeration]

    def test_order_and_worker_determinism(self):
        dataset, fol_maps = build_mixed_dataset()
        stub = stub_for_dataset(dataset, fol_maps)
        runs = [run_subtask(dataset, 1, PipelineConfig(worker_limit=w), stub)
                for w in (1, 4, 4)]
        baseline = [(p.id, p.valid, p.relevant) for p in runs[0]]
        for other in runs[1:]:
            assert [(p.id, p.valid, p.relevant) for p in other] == baseline

    def test_failed_sample_keeps_run_alive(self):
        dataset, fol_maps = build_mixed_dataset()
        dataset = dataset[:3]
        stub = StubGateway()
        for sample in dataset[1:]:
            script_multistep(stub, [*sample.premises, sample.conclusion],
                             fol_maps[sample.id])
        # sample 0 never gets fixtures: every attempt raises, sample fails
        predictions = run_subtask(dataset, 1, PipelineConfig(), stub)
        assert predictions[0].diagnostics["failed"]
        assert predictions[0].valid is False
        assert not predictions[1].diagnostics["failed"]

    def test_subtask3_skips_translation_for_english(self):
        dataset, fol_maps = build_mixed_dataset()
        dataset = dataset[:2]  # all language="en"
        stub = stub_for_dataset(dataset, fol_maps)
        calls = []
        original = stub.complete

        def spy(template_name, prompt, *, temperature=0.0, attempt=1):
            calls.append(template_name)
            return original(template_name, prompt, temperature=temperature,
                            attempt=attempt)

        stub.complete = spy
        cfg = PipelineConfig(translate_first=True, worker_limit=1)
        run_subtask(dataset, 3, cfg, stub)
        assert "translation" not in calls

    def test_subtask3_translates_non_english(self):
        sample, fol_map = mood_sample("de1", 1, "AAA",
                                      ("hund", "saeuger", "tier"),
                                      label_valid=True, label_plausible=True,
                                      language="de")
        german = Syllogism(id="de1",
                           premises=("Jeder saeuger ist ein tier.",
                                     "Jeder hund ist ein saeuger."),
                           conclusion="Jeder hund ist ein tier.",
                           label_valid=True, label_plausible=True,
                           language="de")
        stub = StubGateway()
        original_text = format_syllogism(german.premises, german.conclusion)
        translation = format_syllogism(sample.premises, sample.conclusion)
        stub.script("translation",
                    load_template("translation").render(syllogism=original_text),
                    translation)
        eval_prompt = load_template("translation_eval").render(
            formatted_original=original_text, translation=translation)
        stub.script("translation_eval", eval_prompt,
                    json.dumps({"feedback": "ok", "correct": True}))
        script_multistep(stub, [*sample.premises, sample.conclusion], fol_map)
        cfg = PipelineConfig(translate_first=True, worker_limit=1)
        predictions = run_subtask([german], 3, cfg, stub)
        assert predictions[0].valid is True
        assert not predictions[0].diagnostics["failed"]

    def test_subtask2_symbolic_retrieval(self):
        sample, fol_map = mood_sample("s2", 1, "AAA",
                                      ("beagle", "hound", "dog"),
                                      label_valid=True, label_plausible=True)
        noise = "Every cloud is a fluffy thing."
        noise_fol = r"\forall x (cloud(x) \rightarrow fluffy(x))"
        widened = Syllogism(
            id="s2", premises=(sample.premises[0], noise, sample.premises[1]),
            conclusion=sample.conclusion, label_valid=True,
            label_plausible=True, gold_relevant=(0, 2))
        fol_map = dict(fol_map)
        fol_map[noise] = noise_fol
        stub = StubGateway()
        script_multistep(stub, [*widened.premises, widened.conclusion], fol_map)
        predictions = run_subtask([widened], 2, PipelineConfig(), stub)
        assert predictions[0].relevant == (0, 2)

    def test_end_to_end_strategy(self):
        sample, _ = mood_sample("e2e", 1, "AAA", ("a1", "b1", "c1"),
                                label_valid=True, label_plausible=True)
        stub = StubGateway()
        text = format_syllogism(sample.premises, sample.conclusion)
        prompt = load_template("end_to_end_retrieval").render(syllogism=text)
        stub.script("end_to_end_retrieval", prompt,
                    json.dumps({"reasoning": "r", "valid": True,
                                "relevant_premises": [0, 1]}))
        cfg = PipelineConfig(strategy=Strategy.END_TO_END)
        predictions = run_subtask([sample], 2, cfg, stub)
        assert predictions[0].valid is True
        assert predictions[0].relevant == (0, 1)

    def test_llm_prover_strategy(self, barbara_sample):
        sample, fol_map = barbara_sample
        stub = StubGateway()
        script_multistep(stub, [*sample.premises, sample.conclusion], fol_map)
        fols = [P(fol_map[t]) for t in (*sample.premises, sample.conclusion)]
        from syllogic.fol import render_latex

        prompt = load_template("llm_prover").render(
            premises="\n".join(render_latex(s) for s in fols[:-1]),
            conclusion=render_latex(fols[-1]))
        stub.script("llm_prover", prompt, r"\boxed{true}")
        cfg = PipelineConfig(strategy=Strategy.LLM_PROVER)
        prediction = classify_validity(sample, cfg, stub)
        assert prediction.valid is True
        assert prediction.diagnostics["engine"] == "llm"

    def test_llm_retrieval_strategy(self):
        sample, fol_map = mood_sample("lr", 1, "AAA", ("a2", "b2", "c2"),
                                      label_valid=True, label_plausible=True)
        stub = StubGateway()
        script_multistep(stub, [*sample.premises, sample.conclusion], fol_map)
        from syllogic.fol import render_latex

        fol_premises = [render_latex(P(fol_map[t])) for t in sample.premises]
        fol_conclusion = render_latex(P(fol_map[sample.conclusion]))
        prompt = load_template("llm_retrieval").render(
            premises="\n".join(f"{i}: {p}" for i, p in enumerate(fol_premises)),
            conclusion=fol_conclusion)
        stub.script("llm_retrieval", prompt, "[0, 1]")
        cfg = PipelineConfig(strategy=Strategy.LLM_RETRIEVAL)
        predictions = run_subtask([sample], 2, cfg, stub)
        assert predictions[0].relevant == (0, 1)

    def test_direct_prover9_strategy(self):
        sample = Syllogism(
            id="dp", premises=("Every dog is a mammal.",
                               "Every mammal is an animal."),
            conclusion="Every dog is an animal.", label_valid=True)
        prover9_map = {
            "Every dog is a mammal.": "all x (Dog(x) -> Mammal(x))",
            "Every mammal is an animal.": "all x (Mammal(x) -> Animal(x))",
            "Every dog is an animal.": "all x (Dog(x) -> Animal(x))",
        }
        stub = StubGateway()
        initial = load_template("direct_prover9_initial")
        default = load_template("direct_prover9_default")
        rendered = []
        for i, text in enumerate([*sample.premises, sample.conclusion]):
            if i == 0:
                prompt = initial.render(proposition=text)
                name = "direct_prover9_initial"
            else:
                prompt = default.render(
                    previous_propositions="\n".join(
                        f"{t} -> {f}" for t, f in rendered),
                    proposition=text)
                name = "direct_prover9_default"
            stub.script(name, prompt, f"\\boxed{{{prover9_map[text]}}}")
            rendered.append((text, prover9_map[text]))
        cfg = PipelineConfig(strategy=Strategy.DIRECT_PROVER9)
        prediction = classify_validity(sample, cfg, stub)
        assert prediction.valid is True
