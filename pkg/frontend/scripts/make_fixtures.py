"""Generate replay fixtures + manifest for the webui end-to-end test.

Writes <digest>.txt fixture files the way the service will look them up, and
a manifest.json with the exact texts the test types into the UI, so the two
sides can never drift apart.
"""

import json
import sys
from pathlib import Path

from schemaforge.document import parse_json, serialize_json
from schemaforge.gateway import GatewayConfig, message_digest
from schemaforge.prompts import PromptKind, build_prompt

REPO = Path(__file__).resolve().parents[2]

FIG1_PROMPT = (
    "Create a schema about MOF synthesis in chemistry. We have a list of synthesis "
    "experiments. Each experiment has a metal salt and a ligand and also creator, date, "
    "temperature, duration, product_purity (boolean). Ligand and metal salt should be "
    "objects which each have name, mass, inchi as properties."
)
FIG2_PROMPT = (
    "The metal salt and ligand both have the same structure, both are compounds. Instead "
    "of having two different definitions, create one compound class with their properties "
    "and then make metal_salt and ligand both refer to this compound class."
)
FIG3_INPUT = """{
  "mof_id": "mof-123",
  "reagents": [
    { "role": "metal", "name": "ZrCl4" },
    { "role": "linker", "name": "BDC" },
    { "role": "linker", "name": "DABCO" }
  ]
}"""
FIG3_TARGET = """{
  "type": "object",
  "properties": {
    "materialId": { "type": "string" },
    "metal": { "type": "string" },
    "linkers": {
      "type": "array",
      "items": { "type": "string" }
    }
  }
}"""
FIG3_MAPPING = """{
  "materialId": mof_id,
  "metal": reagents[role = "metal"].name,
  "linkers": reagents[role = "linker"].name
}"""
INVALID_PROMPT = "Propose something broken so the gate can be demonstrated."
INVALID_RESPONSE = '{"type":"strng"}'


def main(target_dir: str) -> None:
    out = Path(target_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = GatewayConfig()

    def record(bundle, text: str) -> None:
        digest = message_digest(config.model, config.temperature, list(bundle.messages))
        (out / f"{digest}.txt").write_text(text, encoding="utf-8")

    fig1_text = (REPO / "tests" / "fixtures" / "fig1_response.json").read_text(encoding="utf-8")
    fig2_text = (REPO / "tests" / "fixtures" / "fig2_response.json").read_text(encoding="utf-8")

    record(build_prompt(PromptKind.schema_create, description=FIG1_PROMPT), fig1_text)

    fig1_schema = parse_json(fig1_text)
    record(
        build_prompt(
            PromptKind.schema_modify,
            description=FIG2_PROMPT,
            schema=fig1_schema,
            prior_proposal=fig1_text.strip(),
        ),
        fig2_text,
    )

    record(
        build_prompt(
            PromptKind.mapping_generate,
            document=parse_json(FIG3_INPUT),
            target_schema=parse_json(FIG3_TARGET),
        ),
        "```jsonata\n" + FIG3_MAPPING + "\n```",
    )

    record(build_prompt(PromptKind.schema_create, description=INVALID_PROMPT), INVALID_RESPONSE)

    manifest = {
        "fig1_prompt": FIG1_PROMPT,
        "fig2_prompt": FIG2_PROMPT,
        "fig3_input": FIG3_INPUT,
        "fig3_target": FIG3_TARGET,
        "fig3_mapping": FIG3_MAPPING,
        "fig3_output": '{"materialId":"mof-123","metal":"ZrCl4","linkers":["BDC","DABCO"]}',
        "fig1_schema": json.loads(fig1_text),
        "fig2_schema": json.loads(fig2_text),
        "invalid_prompt": INVALID_PROMPT,
        "invalid_response": INVALID_RESPONSE,
        "fig2_text": fig2_text.strip(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
    print(serialize_json({"fixtures": len(list(out.glob("*.txt")))}))


if __name__ == "__main__":
    main(sys.argv[1])
