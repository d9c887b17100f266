import java.util.ArrayList;
import java.util.List;

public class BeanBinDAO {
    private String storeName;
    private List<Object> store = new ArrayList<Object>();

    public BeanBinDAO(String storeName) {
        this.storeName = storeName;
    }

    public List<Object> search(Class<?> type, Query query) {
        List<Object> results = new ArrayList<Object>();
        for (Object candidate : store) {
            if (query.matches(candidate)) {
                results.add(candidate);
            }
        }
        return results;
    }
}
