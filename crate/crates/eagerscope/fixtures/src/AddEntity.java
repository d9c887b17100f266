public class AddEntity {
    private Object entity;

    public AddEntity(Object entity) {
        this.entity = entity;
    }
}
