# Property-based tests for splforge
