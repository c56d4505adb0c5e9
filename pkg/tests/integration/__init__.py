# integration tests package
