import importlib.util
from pathlib import Path

import orjson
import pytest

from app.services.algebra.coeff import Scalar
from app.services.algebra.freealg import NcPoly, a
from config import settings

SCRIPT = Path(__file__).parent.parent / "scripts" / "qbundle.py"
_spec = importlib.util.spec_from_file_location("qbundle_cli", SCRIPT)
cli = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(cli)


@pytest.fixture(autouse=True)
def restore_settings():
    budget, seed = settings.engine.reduction_budget, settings.verify.seed
    yield
    settings.engine.reduction_budget, settings.verify.seed = budget, seed


async def run(capsys, *argv):
    code = await cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.asyncio
async def test_normal_form(capsys):
    code, out, _ = await run(capsys, "nf", "--n", "2", "a[2,2]*a[1,1]")
    assert code == cli.EXIT_OK
    assert out.strip() == "a[1,1]*a[2,2] - (q^-1 - q)*a[1,2]*a[2,1]"


@pytest.mark.asyncio
async def test_normal_form_at_classical_q(capsys):
    code, out, _ = await run(capsys, "nf", "--n", "2", "--q", "1", "a[2,2]*a[1,1]")
    assert code == cli.EXIT_OK
    assert out.strip() == "a[1,1]*a[2,2]"


@pytest.mark.asyncio
async def test_json_report(capsys, mq2):
    code, out, _ = await run(capsys, "nf", "--n", "2", "--format", "json", "a[1,2]*a[1,1]")
    assert code == cli.EXIT_OK
    data = orjson.loads(out)
    assert data["schema"] == 1
    assert data["result"] == "pass"
    (check,) = data["checks"]
    assert check["id"] == "nf.result"
    assert mq2.parse(check["details"]["normal_form"]) == NcPoly.word((a(1, 1), a(1, 2)), Scalar.q())


@pytest.mark.asyncio
async def test_usage_errors_go_to_stderr(capsys):
    code, out, err = await run(capsys, "nf", "--n", "2", "a[3,1]")
    assert code == cli.EXIT_USAGE
    assert out == ""
    assert "usage error" in err

    code, _, _ = await run(capsys, "det", "--family", "torus", "--n", "2")
    assert code == cli.EXIT_USAGE

    code, _, err = await run(capsys, "nf", "--budget", "0", "a[1,1]")
    assert code == cli.EXIT_USAGE
    assert "--budget" in err


@pytest.mark.asyncio
async def test_budget_exhaustion(capsys):
    code, out, err = await run(capsys, "nf", "--n", "4", "--budget", "1", "a[4,4]*a[4,3]*a[4,2]*a[4,1]")
    assert code == cli.EXIT_BUDGET
    assert out == ""
    assert "budget exhausted" in err


@pytest.mark.parametrize("argv", [["frobnicate"], ["nf", "--q", "0", "a[1,1]"], ["localize", "--invert", "x"], ["verify", "nosuch"]])
def test_argument_errors_exit_with_usage_code(argv):
    with pytest.raises(SystemExit) as excinfo:
        cli.build_parser().parse_args(argv)
    assert excinfo.value.code == 2


@pytest.mark.asyncio
async def test_verify_det(capsys):
    code, out, _ = await run(capsys, "verify", "det", "--n", "2")
    assert code == cli.EXIT_OK
    assert "All checks passed" in out


@pytest.mark.asyncio
async def test_twist_product(capsys, mq2):
    code, out, _ = await run(capsys, "twist-product", "--family", "mq", "--n", "2", "--mode", "gamma", "a[1,1]", "a[1,2]")
    assert code == cli.EXIT_OK
    assert mq2.parse(out.strip()) == NcPoly.word((a(1, 1), a(1, 2)), Scalar.g(1, 2, -1))


@pytest.mark.asyncio
async def test_build_coact_and_localize(capsys):
    code, out, _ = await run(capsys, "build", "--family", "slq", "--n", "2", "--format", "json")
    assert code == cli.EXIT_OK
    assert orjson.loads(out)["checks"][0]["details"]["name"] == "slq2"

    code, out, _ = await run(capsys, "coact", "--n", "2", "--invert", "1", "d[1]^-1")
    assert code == cli.EXIT_OK
    assert out.strip().endswith("d[1]^-1 (x) p[1,1]^-1")

    code, out, _ = await run(capsys, "localize", "--n", "2", "--invert", "1", "--format", "json")
    assert code == cli.EXIT_OK
    data = orjson.loads(out)
    assert {check["id"] for check in data["checks"]} == {"localize.result", "localize.push_rules", "localize.grading"}
    assert data["result"] == "pass"


def test_each_command_keeps_its_own_defaults():
    parser = cli.build_parser()
    nf = parser.parse_args(["nf", "a[1,1]"])
    assert (nf.family, nf.n) == ("mq", 2)
    assert parser.parse_args(["build"]).family == "mq"
    assert parser.parse_args(["twist-product", "a[1,1]", "a[1,2]"]).family == "slq"
    assert parser.parse_args(["verify", "det"]).n is None
    assert parser.parse_args(["coact", "a[1,1]"]).n == 2


@pytest.mark.asyncio
async def test_normal_form_without_size_uses_rank_two(capsys):
    code, out, _ = await run(capsys, "nf", "a[2,1]*a[1,1]")
    assert code == cli.EXIT_OK
    assert out.strip() == "q*a[1,1]*a[2,1]"

    code, out, err = await run(capsys, "nf", "--n", "1", "a[1,1]")
    assert code == cli.EXIT_USAGE
    assert out == ""
