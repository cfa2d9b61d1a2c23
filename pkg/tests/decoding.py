"""Drive one external call from a fresh token and return its call tree."""
from revertlab.adversary import ChoiceSource
from revertlab.config import Config
from revertlab.models import Monitor, make_model
from revertlab.trace import Trace

# havoced argument choices: transfer (from, to, amount, sender), mint (to, amount, sender)
T_ARGS = [1, 2, 1, 1]
M_ARGS = [1, 1, 0]

# k=1 with b=true twice, then k=2 with b=false
MINT_MINT = [1, *M_ARGS, 1, 1, *M_ARGS, 1, 2, 0, 1]
# k=0, b=true, k=1, b=false
TRANSFER_NESTED_MINT = [0, *T_ARGS, 1, 1, *M_ARGS, 0, 1]
# k=0, b=true, k=0, b=false
TWO_NESTED_TRANSFERS = [0, *T_ARGS, 1, 0, *T_ARGS, 0, 1]

EXPECTED = {
    "mint;mint": [["ExternalCall", [["Mint", []], ["ExternalCall", [["Mint", []], ["ExternalCall", []]]]]]],
    "transfer with nested mint": [["ExternalCall", [["Transfer", []], ["ExternalCall", [["Mint", []]]]]]],
    "two nested transfers": [["ExternalCall", [["Transfer", []], ["ExternalCall", [["Transfer", []]]]]]],
}
SEQUENCES = {
    "mint;mint": MINT_MINT,
    "transfer with nested mint": TRANSFER_NESTED_MINT,
    "two nested transfers": TWO_NESTED_TRANSFERS,
}


def decode(choices, gas=6, model="token-notify-safe"):
    m = make_model(Config(model=model))
    cs = ChoiceSource.exhaustive(choices)
    mon = Monitor(m)
    m.adversary(cs, mon).external_call(m.initial_state(), gas)
    assert cs.remaining() == 0, "choices left over"
    return Trace(model, {}, [], list(cs.log), mon.frames), mon
