# Verification suites, reports and fixture corpus
