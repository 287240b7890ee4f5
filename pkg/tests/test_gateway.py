"""Templates, extraction, transport, and the prompt workflows."""
from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import pytest

from syllogic.fol import render_latex
from syllogic.gateway.client import prompt_digest
from syllogic.gateway import (
    ChatClient,
    ChatMessage,
    ChatRequest,
    HttpStatusError,
    IndexOutOfRangeError,
    NetworkError,
    NoBoxedContentError,
    NoJsonFoundError,
    NotABooleanError,
    ParseExhaustedError,
    PromptTemplate,
    RetryPolicy,
    SchemaMismatchError,
    StubGateway,
    TEMPLATE_NAMES,
    TemplateError,
    TranslationOutcome,
    UnscriptedPromptError,
    builtin_templates,
    end_to_end_classify,
    extract_boxed,
    extract_json_object,
    llm_prove,
    llm_retrieve_relevant,
    load_template,
    parse_syllogism_multistep,
    parse_syllogism_singlestep,
    translate_syllogism,
)

GOLDEN_DIR = Path(__file__).parent / "golden" / "prompts"

FIXED_SLOTS = {
    "parser_default": {
        "previous_propositions": "Every bird is an animal. -> \\forall x (bird(x) \\rightarrow animal(x))",
        "proposition": "No fish is a bird.",
    },
    "parser_initial": {"proposition": "Every bird is an animal."},
    "translation": {"syllogism": "P1: Jeder Vogel ist ein Tier.\nP2: Kein Fisch ist ein Vogel.\nC: Kein Fisch ist ein Tier."},
    "translation_eval": {
        "formatted_original": "P1: Jeder Vogel ist ein Tier.\nP2: Kein Fisch ist ein Vogel.\nC: Kein Fisch ist ein Tier.",
        "translation": "P1: Every bird is an animal.\nP2: No fish is a bird.\nC: No fish is an animal.",
    },
    "translation_feedback": {
        "syllogism": "P1: Jeder Vogel ist ein Tier.\nP2: Kein Fisch ist ein Vogel.\nC: Kein Fisch ist ein Tier.",
        "feedback": "The second premise was mistranslated.",
    },
    "end_to_end": {"syllogism": "P1: Every bird is an animal.\nP2: No fish is a bird.\nC: No fish is an animal."},
    "end_to_end_retrieval": {"syllogism": "P1: Every bird is an animal.\nP2: No fish is a bird.\nC: No fish is an animal."},
    "direct_prover9_default": {
        "previous_propositions": "Every bird is an animal. -> all x (B(x) -> A(x))",
        "proposition": "No fish is a bird.",
    },
    "direct_prover9_initial": {"proposition": "Every bird is an animal."},
    "single_step": {
        "num_premises": 2,
        "syllogism": "P1: Every bird is an animal.\nP2: No fish is a bird.\nC: No fish is an animal.",
    },
    "llm_prover": {
        "premises": "\\forall x (bird(x) \\rightarrow animal(x))\n\\forall x (fish(x) \\rightarrow \\neg bird(x))",
        "conclusion": "\\forall x (fish(x) \\rightarrow \\neg animal(x))",
    },
    "llm_retrieval": {
        "premises": "0: \\forall x (bird(x) \\rightarrow animal(x))\n1: \\forall x (fish(x) \\rightarrow \\neg bird(x))",
        "conclusion": "\\forall x (fish(x) \\rightarrow \\neg animal(x))",
    },
}


class TestTemplates:
    def test_all_templates_load(self):
        templates = builtin_templates()
        assert set(templates) == set(TEMPLATE_NAMES)
        assert len(templates) == 12

    @pytest.mark.parametrize("name", sorted(FIXED_SLOTS))
    def test_rendered_prompts_match_golden_bytes(self, name):
        rendered = load_template(name).render(**FIXED_SLOTS[name])
        golden = (GOLDEN_DIR / f"{name}.rendered.txt").read_text(encoding="utf-8")
        assert rendered == golden

    def test_literal_braces_survive_rendering(self):
        rendered = load_template("llm_prover").render(premises="P", conclusion="C")
        assert "\\boxed{true}" in rendered and "\\boxed{false}" in rendered
        rendered = load_template("end_to_end").render(syllogism="S")
        assert '"reasoning": "..."' in rendered

    def test_missing_slot_value_rejected(self):
        with pytest.raises(TemplateError):
            load_template("parser_default").render(proposition="only one")

    def test_template_must_contain_slots(self):
        with pytest.raises(TemplateError):
            PromptTemplate("bad", "no slots here", frozenset({"syllogism"}))


class TestExtraction:
    def test_boxed_last_wins(self):
        assert extract_boxed(r"\boxed{a} text \boxed{b}") == "b"

    def test_boxed_nested_braces(self):
        assert extract_boxed(r"\boxed{\forall x (p(x))} and \boxed{f{g}h}") == "f{g}h"

    def test_boxed_missing(self):
        with pytest.raises(NoBoxedContentError):
            extract_boxed("no box here")

    def test_json_object(self):
        assert extract_json_object('x {"feedback": "ok", "correct": true}') == \
            {"feedback": "ok", "correct": True}

    def test_json_array(self):
        got = extract_json_object('[{"proposition": "p", "fol_formula": "f"}]')
        assert got == [{"proposition": "p", "fol_formula": "f"}]

    def test_json_last_top_level_wins(self):
        assert extract_json_object('{"a": 1} and then {"b": {"c": 2}}') == \
            {"b": {"c": 2}}

    def test_json_fenced_block(self):
        text = "```json\n{\"valid\": false, \"reasoning\": \"r\"}\n```"
        assert extract_json_object(text) == {"valid": False, "reasoning": "r"}

    def test_json_missing(self):
        with pytest.raises(NoJsonFoundError):
            extract_json_object("prose with no payload")


class _ChatHandler(BaseHTTPRequestHandler):
    status = 200

    def do_POST(self):
        length = int(self.headers["Content-Length"])
        body = json.loads(self.rfile.read(length))
        if self.server.status != 200:
            self.send_response(self.server.status)
            self.end_headers()
            self.wfile.write(b"{}")
            return
        reply = {
            "choices": [{
                "message": {
                    "role": "assistant",
                    "content": f"echo:{body['messages'][-1]['content']}"
                              f"@t={body['temperature']}",
                }
            }]
        }
        payload = json.dumps(reply).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def chat_server():
    server = HTTPServer(("127.0.0.1", 0), _ChatHandler)
    server.status = 200
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()


class TestChatClient:
    def test_echo_roundtrip(self, chat_server):
        client = ChatClient(base_url=f"http://127.0.0.1:{chat_server.server_port}",
                            api_key="k", model="m")
        request = ChatRequest(model="m", messages=(ChatMessage("user", "hello"),))
        assert client.chat(request) == "echo:hello@t=0.0"

    def test_http_status_error(self, chat_server):
        chat_server.status = 500
        client = ChatClient(base_url=f"http://127.0.0.1:{chat_server.server_port}")
        with pytest.raises(HttpStatusError) as err:
            client.chat(ChatRequest(model="m", messages=(ChatMessage("user", "x"),)))
        assert err.value.code == 500

    def test_unreachable_endpoint(self):
        client = ChatClient(base_url="http://127.0.0.1:9", timeout=0.5)
        with pytest.raises(NetworkError):
            client.chat(ChatRequest(model="m", messages=(ChatMessage("user", "x"),)))

    def test_request_validation(self):
        with pytest.raises(ValueError):
            ChatRequest(model="m", messages=())
        with pytest.raises(ValueError):
            ChatRequest(model="m", messages=(ChatMessage("user", "x"),),
                        temperature=3.0)
        with pytest.raises(ValueError):
            ChatMessage("robot", "x")


class TestStub:
    def test_unscripted_prompt_raises(self):
        with pytest.raises(UnscriptedPromptError):
            StubGateway().complete("parser_initial", "never scripted")

    def test_attempt_indexing_and_clamping(self):
        stub = StubGateway()
        stub.script("t", "p", "first", "second")
        assert stub.complete("t", "p", attempt=1) == "first"
        assert stub.complete("t", "p", attempt=2) == "second"
        assert stub.complete("t", "p", attempt=9) == "second"

    def test_json_roundtrip(self):
        stub = StubGateway()
        stub.script("t", "p", "only")
        loaded = StubGateway.from_json(stub.to_json())
        assert loaded.complete("t", "p") == "only"


class TestWorkflows:
    def _stub_single(self, text, *responses):
        stub = StubGateway()
        prompt = load_template("parser_initial").render(proposition=text)
        stub.script("parser_initial", prompt, *responses)
        return stub

    def test_multistep_context_lines(self):
        first = "Every bird is an animal."
        second = "No fish is a bird."
        stub = self._stub_single(first, r"\boxed{\forall x (bird(x) \rightarrow animal(x))}")
        follow_prompt = load_template("parser_default").render(
            previous_propositions=(
                "Every bird is an animal. -> "
                r"\forall x (bird(x) \rightarrow animal(x))"),
            proposition=second)
        stub.script("parser_default", follow_prompt,
                    r"\boxed{\forall x (fish(x) \rightarrow \neg bird(x))}")
        mapping = parse_syllogism_multistep(stub, [first, second])
        assert len(mapping.entries) == 2
        assert render_latex(mapping.sentence_for(second)) == \
            r"\forall x (fish(x) \rightarrow \neg bird(x))"

    def test_retry_uses_retry_temperature_then_succeeds(self):
        text = "Every bird is an animal."
        stub = self._stub_single(text, "nope", "nope again",
                                 r"\boxed{\forall x (bird(x) \rightarrow animal(x))}")
        seen = []
        original = stub.complete

        def spy(template_name, prompt, *, temperature=0.0, attempt=1):
            seen.append((attempt, temperature))
            return original(template_name, prompt,
                            temperature=temperature, attempt=attempt)

        stub.complete = spy
        mapping = parse_syllogism_multistep(stub, [text],
                                            RetryPolicy(max_attempts=3))
        assert len(mapping.entries) == 1
        assert seen == [(1, 0.0), (2, 0.6), (3, 0.6)]

    def test_parse_exhausted(self):
        text = "Every bird is an animal."
        stub = self._stub_single(text, "never parses")
        with pytest.raises(ParseExhaustedError) as err:
            parse_syllogism_multistep(stub, [text], RetryPolicy(max_attempts=3))
        assert err.value.attempts == 3
        assert err.value.proposition_index == 0

    def test_singlestep(self):
        syllogism = "P1: a.\nP2: b.\nC: c."
        prompt = load_template("single_step").render(num_premises=2,
                                                     syllogism=syllogism)
        stub = StubGateway()
        payload = json.dumps([
            {"proposition": "a.", "fol_formula": "\\forall x (a(x) \\rightarrow b(x))"},
            {"proposition": "b.", "fol_formula": "\\forall x (b(x) \\rightarrow c(x))"},
            {"proposition": "c.", "fol_formula": "\\forall x (a(x) \\rightarrow c(x))"},
        ])
        stub.script("single_step", prompt, payload)
        mapping = parse_syllogism_singlestep(stub, syllogism, 2)
        assert len(mapping.entries) == 3

    def test_singlestep_wrong_count_exhausts(self):
        syllogism = "P1: a.\nC: c."
        prompt = load_template("single_step").render(num_premises=1,
                                                     syllogism=syllogism)
        stub = StubGateway()
        stub.script("single_step", prompt, json.dumps(
            [{"proposition": "a.", "fol_formula": "\\forall x (a(x))"}]))
        with pytest.raises(ParseExhaustedError):
            parse_syllogism_singlestep(stub, syllogism, 1,
                                       RetryPolicy(max_attempts=2))

    def _translation_stub(self, original, translation, verdict,
                          corrected=None, feedback="looks fine"):
        stub = StubGateway()
        stub.script("translation",
                    load_template("translation").render(syllogism=original),
                    translation)
        eval_prompt = load_template("translation_eval").render(
            formatted_original=original, translation=translation)
        stub.script("translation_eval", eval_prompt,
                    json.dumps({"feedback": feedback, "correct": verdict}))
        if corrected is not None:
            fb_prompt = load_template("translation_feedback").render(
                syllogism=original, feedback=feedback)
            stub.script("translation_feedback", fb_prompt, corrected)
        return stub

    def test_translation_accepted_first_pass(self):
        stub = self._translation_stub("orig", "good translation", True)
        outcome = translate_syllogism(stub, "orig")
        assert outcome == TranslationOutcome("good translation", "looks fine",
                                             True, False)

    def test_translation_corrected_once(self):
        stub = self._translation_stub("orig", "bad translation", False,
                                      corrected="better translation",
                                      feedback="premise 2 is wrong")
        outcome = translate_syllogism(stub, "orig")
        assert outcome.corrected
        assert not outcome.self_eval_correct
        assert outcome.translation == "better translation"
        assert outcome.self_eval_feedback == "premise 2 is wrong"

    def test_translation_eval_without_json(self):
        stub = self._translation_stub("orig", "t", True)
        eval_prompt = load_template("translation_eval").render(
            formatted_original="orig", translation="t")
        stub.fixtures[("translation_eval", prompt_digest(eval_prompt))] = ("prose only",)
        with pytest.raises(NoJsonFoundError):
            translate_syllogism(stub, "orig")

    def test_end_to_end_classify(self):
        stub = StubGateway()
        text = "P1: a.\nC: b."
        prompt = load_template("end_to_end").render(syllogism=text)
        stub.script("end_to_end", prompt,
                    json.dumps({"reasoning": "ok", "valid": "true"}))
        assert end_to_end_classify(stub, text, want_relevance=False) == (True, None)

    def test_end_to_end_with_relevance(self):
        stub = StubGateway()
        text = "P1: a.\nP2: b.\nC: c."
        prompt = load_template("end_to_end_retrieval").render(syllogism=text)
        stub.script("end_to_end_retrieval", prompt,
                    json.dumps({"reasoning": "r", "valid": True,
                                "relevant_premises": [1, 0]}))
        assert end_to_end_classify(stub, text, want_relevance=True) == (True, [0, 1])

    def test_end_to_end_schema_mismatch(self):
        stub = StubGateway()
        prompt = load_template("end_to_end").render(syllogism="s")
        stub.script("end_to_end", prompt, json.dumps({"valid": "maybe",
                                                      "reasoning": "?"}))
        with pytest.raises(SchemaMismatchError):
            end_to_end_classify(stub, "s", want_relevance=False)

    def test_llm_prove(self):
        stub = StubGateway()
        prompt = load_template("llm_prover").render(premises="f1\nf2",
                                                    conclusion="c")
        stub.script("llm_prover", prompt, r"analysis \boxed{true}")
        assert llm_prove(stub, ["f1", "f2"], "c") is True
        stub.script("llm_prover", prompt, r"\boxed{false}")
        assert llm_prove(stub, ["f1", "f2"], "c") is False
        stub.script("llm_prover", prompt, r"\boxed{maybe}")
        with pytest.raises(NotABooleanError):
            llm_prove(stub, ["f1", "f2"], "c")

    def test_llm_retrieve(self):
        stub = StubGateway()
        premises = ["a", "b", "c", "d"]
        prompt = load_template("llm_retrieval").render(
            premises="\n".join(f"{i}: {p}" for i, p in enumerate(premises)),
            conclusion="c")
        stub.script("llm_retrieval", prompt, "[0, 2]")
        assert llm_retrieve_relevant(stub, premises, "c") == [0, 2]
        stub.script("llm_retrieval", prompt, "[]")
        assert llm_retrieve_relevant(stub, premises, "c") == []
        stub.script("llm_retrieval", prompt, "[5]")
        with pytest.raises(IndexOutOfRangeError):
            llm_retrieve_relevant(stub, premises, "c")
