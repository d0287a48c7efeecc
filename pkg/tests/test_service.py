import json
from importlib import resources

import pytest
from fastapi.testclient import TestClient

from cfexplain.gridworld import state_to_dict
from cfexplain.service import ServiceConfig, create_app
from cfexplain.tasks import task_to_dict


@pytest.fixture()
def client(tmp_path, example_task):
    app = create_app(ServiceConfig(data_dir=str(tmp_path), default_depth=1))
    with TestClient(app) as client:
        client.post("/tasks", json=task_to_dict(example_task))
        yield client


def log_events(client):
    return client.app.state.log.events()


def demo_actions(example_task):
    return [a.value for a in example_task.reference_demo.actions]


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


class TestTasks:
    def test_round_trip_is_bit_identical(self, client, example_task):
        stored = client.get("/tasks/example").json()
        assert stored == task_to_dict(example_task)

    def test_list(self, client):
        assert client.get("/tasks").json() == {"tasks": ["example"]}

    def test_unknown_task_404(self, client):
        response = client.get("/tasks/nope")
        assert response.status_code == 404
        assert response.json()["kind"] == "unknown_task"

    def test_malformed_task_400(self, client):
        assert client.post("/tasks", json={"id": "x"}).status_code == 400


class TestParse:
    def test_green_ball(self, client):
        response = client.post("/parse", json={"utterance": "go to the green ball"})
        assert response.status_code == 200
        assert response.json() == {"program": "goto(green,ball)"}

    def test_unknown_token_payload(self, client):
        response = client.post("/parse", json={"utterance": "go to the top right"})
        assert response.status_code == 422
        assert response.json() == {"kind": "unknown_token", "token": "top"}

    def test_missing_field_400(self, client):
        assert client.post("/parse", json={}).status_code == 400


class TestExecute:
    def test_runs_the_goal(self, client, example_task):
        response = client.post(
            "/execute", json={"task_id": "example", "program": "goto(blue,ball)"}
        )
        assert response.status_code == 200
        actions = response.json()["trajectory"]["actions"]
        assert actions == demo_actions(example_task)

    def test_unknown_task(self, client):
        response = client.post("/execute", json={"task_id": "zzz", "program": "goto(blue,ball)"})
        assert response.status_code == 404

    def test_unsatisfiable(self, client):
        response = client.post("/execute", json={"task_id": "example", "program": "goto(red,key)"})
        assert response.status_code == 422


class TestStep:
    def test_forward(self, client, example_task):
        body = {"state": state_to_dict(example_task.initial), "action": "forward"}
        response = client.post("/step", json=body)
        assert response.status_code == 200
        assert response.json()["state"]["agent"]["col"] == 2

    def test_illegal_action(self, client, example_task):
        body = {"state": state_to_dict(example_task.initial), "action": "drop"}
        assert client.post("/step", json=body).status_code == 422

    def test_bad_action_name(self, client, example_task):
        body = {"state": state_to_dict(example_task.initial), "action": "fly"}
        assert client.post("/step", json=body).status_code == 400


class TestExplain:
    def test_example_payload(self, client, example_task):
        response = client.post("/explain", json={
            "task_id": "example",
            "utterance": "go to the blue circle",
            "demonstration": demo_actions(example_task),
        })
        assert response.status_code == 200
        body = response.json()
        assert body["explanation"] == "go to the blue ball"
        assert body["method"] == "full"
        assert body["candidates"][0]["sentence"] == "go to the blue ball"

    def test_inline_state(self, client, example_task):
        response = client.post("/explain", json={
            "initial": state_to_dict(example_task.initial),
            "utterance": "go to the blue circle",
            "demonstration": demo_actions(example_task),
        })
        assert response.status_code == 200
        assert response.json()["explanation"] == "go to the blue ball"

    def test_methods_dispatch(self, client, example_task):
        for method in ("no_demo", "no_utterance"):
            response = client.post("/explain", json={
                "task_id": "example",
                "utterance": "go to the blue circle",
                "demonstration": demo_actions(example_task),
                "method": method,
            })
            assert response.status_code == 200, response.text
            assert response.json()["method"] == method

    def test_malformed_action_name_422(self, client):
        response = client.post("/explain", json={
            "task_id": "example",
            "utterance": "go to the blue circle",
            "demonstration": ["forward", "teleport"],
        })
        assert response.status_code == 422
        assert response.json()["kind"] == "invalid_demonstration"

    def test_illegal_demo_reports_index(self, client):
        response = client.post("/explain", json={
            "task_id": "example",
            "utterance": "go to the blue circle",
            "demonstration": ["turn_left", "drop"],
        })
        assert response.status_code == 422
        assert response.json()["index"] == 1

    def test_empty_demo_facing_nothing_409(self, client):
        response = client.post("/explain", json={
            "task_id": "example",
            "utterance": "go to the blue circle",
            "demonstration": [],
        })
        assert response.status_code == 409
        assert response.json()["kind"] == "no_valid_explanation"


class TestCheck:
    def test_success_and_failure(self, client, example_task):
        ok = client.post("/check", json={
            "task_id": "example",
            "utterance": "go to the blue ball",
            "demonstration": demo_actions(example_task),
            "depth": 1,
        })
        assert ok.json() == {"success": True}
        bad = client.post("/check", json={
            "task_id": "example",
            "utterance": "go to the blue circle",
            "demonstration": demo_actions(example_task),
            "depth": 1,
        })
        assert bad.json() == {"success": False}


def test_sentences_depth1_has_360_lines(client):
    response = client.get("/sentences", params={"depth": 1})
    lines = response.text.strip().splitlines()
    assert len(lines) == 360
    assert lines[0] == "go to the blue ball"


def test_session_log_one_event_per_call(tmp_path, example_task):
    app = create_app(ServiceConfig(data_dir=str(tmp_path), default_depth=1))
    with TestClient(app) as client:
        client.post("/tasks", json=task_to_dict(example_task))
        client.post("/parse", json={"utterance": "go to the green ball"})
        client.post("/execute", json={"task_id": "example", "program": "goto(blue,ball)"})
        client.post("/explain", json={
            "task_id": "example",
            "utterance": "go to the blue circle",
            "demonstration": demo_actions(example_task),
        })
        events = app.state.log.events()
    assert len(events) == 4
    assert [e["kind"] for e in events] == ["command", "parse_result", "command", "explanation"]
    assert events[-1]["payload"]["explanation"] == "go to the blue ball"
