public class Criteria {
    private String field;
    private String value;
    private SearchType type;

    public Criteria(String field, String value, SearchType type) {
        this.field = field;
        this.value = value;
        this.type = type;
    }
}
