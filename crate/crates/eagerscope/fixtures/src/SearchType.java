public enum SearchType {
    EQUALS,
    CONTAINS
}
