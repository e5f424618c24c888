"""The classical analogue: redundancy through repetition.

Each bit is repeated n times, sent through a binary symmetric channel and
decoded by majority vote. The decoded error rate drops quickly with n as
long as the flip probability is below one half.
"""

from qdarwin.classical_ecc import (ChannelSpec, encode, error_rate_experiment, hamming_distance,
                                   majority_decode, transmit)

ch = ChannelSpec(p=0.2, seed=1)
sent = encode(1, 7)
received = transmit(sent, ch, trial_index=0)
print(f"sent {sent}  received {received}  distance {hamming_distance(sent, received)}"
      f"  decoded {majority_decode(received)}")

print("\n n   empirical   analytic   (p = 0.1, 20000 trials)")
for n in (1, 3, 5, 7, 9):
    emp, ana = error_rate_experiment(n, 0.1, 20_000, seed=7)
    print(f"{n:2d}   {emp:9.5f}  {ana:9.6f}")
