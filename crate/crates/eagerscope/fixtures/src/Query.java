public class Query {
    private Criteria criteria;

    public Query(Criteria criteria) {
        this.criteria = criteria;
    }

    public boolean matches(Object candidate) {
        return criteria != null;
    }
}
