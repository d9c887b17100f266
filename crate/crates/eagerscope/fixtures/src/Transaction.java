import java.util.ArrayList;
import java.util.List;

public class Transaction {
    private BeanBinDAO dao;
    private Class<?> entityType;
    private List<Object> commands = new ArrayList<Object>();
    private boolean committed;

    public Transaction(BeanBinDAO dao, Class<?> entityType) {
        this.dao = dao;
        this.entityType = entityType;
    }

    public void addCommand(Object command) {
        commands.add(command);
    }

    public void commit() {
        this.committed = true;
    }
}
