import hypothesis

# Property suites must be reproducible run to run: derandomize derives the
# examples from the test function itself, no ambient entropy.
hypothesis.settings.register_profile(
    "ci",
    max_examples=120,
    derandomize=True,
    deadline=None,
)
hypothesis.settings.load_profile("ci")
