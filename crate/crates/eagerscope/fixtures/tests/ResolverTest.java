import java.util.List;
import org.junit.Test;
import static org.junit.Assert.assertEquals;
import static org.junit.Assert.assertTrue;

public class ResolverTest {

    @Test
    public void testFindImplementations() throws Exception {
        Resolver resolve = new Resolver();
        List<Class> list = resolve.findImplementations(Base.class);
        assertTrue(list.contains(ImplOne.class));
        assertTrue(list.contains(ImplTwo.class));
        assertEquals(2, list.size());
    }
}
